import random

import pytest
from gmpy2 import mpq
from hypothesis import settings, strategies as st

from ncconn.algebra import FORMAL, ONE, QuantumTorus
from ncconn.specfile import load

settings.register_profile("ncconn", max_examples=40, deadline=None)
settings.load_profile("ncconn")

# specs that satisfy every axiom
REGULAR = [
    "flat_torus",
    "flat_torus_classical",
    "conformal_classical",
    "scalar_conformal",
    "qconformal",
    "sheared_classical",
]
CLASSICAL = ["flat_torus_classical", "conformal_classical", "sheared_classical"]

_cache = {}


def spec_named(name):
    if name not in _cache:
        _cache[name] = load(name).spec
    return _cache[name]


@pytest.fixture(params=REGULAR)
def spec(request):
    return spec_named(request.param)


@pytest.fixture(params=CLASSICAL)
def classical_spec(request):
    return spec_named(request.param)


@pytest.fixture
def formal():
    return QuantumTorus(FORMAL)


@pytest.fixture
def one():
    return QuantumTorus(ONE)


@pytest.fixture
def rng():
    return random.Random(20240611)


coeffs = st.builds(
    lambda a, b, c: (mpq(a, c), mpq(b)),
    st.integers(-4, 4), st.integers(-3, 3), st.integers(1, 3),
).filter(lambda z: z[0] or z[1])


def elements(alg, degree=2, qdeg=1, max_terms=3):
    """Hypothesis strategy for Laurent polynomials in ``alg``."""
    exps = st.integers(-degree, degree)
    qs = st.integers(-qdeg, qdeg) if alg.formal else st.just(0)
    keys = st.tuples(exps, exps, qs)
    return st.dictionaries(keys, coeffs, max_size=max_terms).map(alg.element)
