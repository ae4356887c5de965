"""Deterministic probe elements and seeded random samples."""

from __future__ import annotations

import random
from typing import List

from gmpy2 import mpq

from .algebra import Element, QuantumTorus
from .forms import CalculusSpec, Tensor, indices


def probes(alg: QuantumTorus) -> List[Element]:
    """The fixed probe set ``1, U, V, U^-1 V``."""
    return [alg.one, alg.U, alg.V, alg.monomial(-1, 1)]


def _coeff(rng: random.Random):
    re = mpq(rng.randint(-3, 3), rng.choice((1, 1, 2, 3)))
    im = mpq(rng.randint(-3, 3), rng.choice((1, 1, 2)))
    if not re and not im:
        re = mpq(1)
    return (re, im)


def random_element(
    alg: QuantumTorus, rng: random.Random, terms: int = 3, degree: int = 2, qdeg: int = 1,
    central: bool = False, fractions: bool = False,
) -> Element:
    """Sum of ``terms`` monomials with exponents bounded by ``degree``.

    ``central`` restricts to the centre (constants times ``q``-powers at formal
    ``q``); ``fractions`` allows one power of the localising element in the
    denominator.
    """
    out = {}
    for _ in range(terms):
        if central and alg.formal:
            m = n = 0
        else:
            m = rng.randint(-degree, degree)
            n = rng.randint(-degree, degree)
        t = rng.randint(-qdeg, qdeg) if alg.formal else 0
        out[(m, n, t)] = _coeff(rng)
    x = alg.element(out)
    if fractions and alg.denominator is not None and rng.random() < 0.5:
        x = alg.element(x.terms, 1)
    return x


def random_tensor(
    spec: CalculusSpec, rng: random.Random, degree: int, central: bool = False, fractions: bool = False,
    terms: int = 2,
) -> Tensor:
    coeffs = {}
    for idx in indices(spec.rank, degree):
        if rng.random() < 0.75:
            coeffs[idx] = random_element(spec.algebra, rng, terms=terms, central=central, fractions=fractions)
    return spec.tensor(degree, coeffs)


def random_form(spec: CalculusSpec, rng: random.Random, central: bool = False, fractions: bool = False) -> Tensor:
    return random_tensor(spec, rng, 1, central=central, fractions=fractions)

