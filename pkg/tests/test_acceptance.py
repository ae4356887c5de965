"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest, or directly with ``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from pathlib import Path

import pytest
from gmpy2 import mpq

sys.path.insert(0, str(Path(__file__).parent))

from conftest import REGULAR, spec_named  # noqa: E402

from ncconn.algebra import FORMAL, QuantumTorus, rep_check  # noqa: E402
from ncconn.calculus import P, Q, antisym, junk_projection, sigma_can  # noqa: E402
from ncconn.connection import (  # noqa: E402
    LEFT,
    RIGHT,
    W_tensor,
    correction_tensor,
    curvature,
    is_bimodule_connection,
    is_hermitian,
    is_torsion_free,
    levi_civita,
)
from ncconn.duality import (  # noqa: E402
    BILINEAR,
    LEFT_LINEAR,
    affine_connection,
    cross_identity_residuals,
    dagger,
    flat,
    phi,
    phi_inverse,
    random_field,
    random_hermitian_derivation,
    sharp,
)
from ncconn.forms import adjoint_hom, alpha_right, dag, quantum_metric_g  # noqa: E402
from ncconn.specfile import load  # noqa: E402
from ncconn.oracle import (  # noqa: E402
    BIMODULE,
    HERMITIAN,
    classical_curvature_oracle,
    koszul_oracle,
    solve_connection_space,
)
from ncconn.sampling import probes, random_form, random_tensor  # noqa: E402

TWO = (mpq(2), mpq(0))
FOUR = (mpq(4), mpq(0))
FLAT = ["flat_torus", "flat_torus_classical", "scalar_conformal", "qconformal"]


def criterion_1():
    t = time.perf_counter()
    s = load("conformal_classical").spec
    agree = levi_civita(s) == koszul_oracle(s)
    dt = time.perf_counter() - t
    return agree and dt < 10, f"levi_civita == koszul_oracle: {agree}, {dt:.2f}s (limit 10s)"


def criterion_2():
    t = time.perf_counter()
    bad = []
    for name in REGULAR:
        s = spec_named(name)
        c = levi_civita(s)
        samples = probes(s.algebra)
        for check in (is_hermitian, is_torsion_free, is_bimodule_connection):
            if not check(c, samples):
                bad.append(f"{name}:{check.__name__}")
    dt = time.perf_counter() - t
    return not bad and dt < 30, f"{len(REGULAR)} specs x 3 properties, failures {bad or 'none'}, {dt:.2f}s (limit 30s)"


def criterion_3():
    cases = [("flat_torus", 2), ("conformal_classical", 1), ("scalar_conformal", 1), ("sheared_classical", 4)]
    singles = []
    for name, bound in cases:
        s = spec_named(name)
        space = solve_connection_space(s, bound)
        singles.append(space.is_singleton and space.particular == levi_civita(s))
    s = spec_named("conformal_classical")
    full = solve_connection_space(s, 1).dimension
    loose = solve_connection_space(s, 1, constraints=(HERMITIAN, BIMODULE)).dimension
    ok = sum(singles) >= 2 and all(singles) and loose > full
    return ok, f"singleton == LC on {sum(singles)}/{len(cases)} specs; dimension {full} -> {loose} without torsion"


def criterion_4():
    bad = []
    for name in REGULAR:
        s = spec_named(name)
        W = W_tensor(s)
        x = Q(W).scale(TWO) - W
        if P(x).scale(TWO) - x != dag(s, W):
            bad.append(f"{name}:(2P-1)(2Q-1)W")
        if Q(P(Q(W))).scale(FOUR) - Q(W) != 0:
            bad.append(f"{name}:(4QPQ-Q)W")
        A, B = alpha_right(s, correction_tensor(s), 1), alpha_right(s, W, 1)
        if any(antisym(A(s.e(k))) != B(s.e(k)) for k in range(s.rank)):
            bad.append(f"{name}:(1-Psi)alpha")
    return not bad, f"3 identities on {len(REGULAR)} specs, failures {bad or 'none'}"


def criterion_5():
    bad = []
    total = 0
    for name in REGULAR:
        res = cross_identity_residuals(levi_civita(spec_named(name)), seed=0, instances=20)
        for key, values in res.items():
            total += len(values)
            if any(values):
                bad.append(f"{name}:{key}")
    return not bad, f"{total} residuals over {len(REGULAR)} specs (20 instances each), nonzero {bad or 'none'}"


def criterion_6():
    bad = []
    for name in REGULAR:
        s = spec_named(name)
        rng = random.Random(6)
        c = levi_civita(s)
        adj = adjoint_hom(s, junk_projection, 2)
        for _ in range(5):
            t = random_tensor(s, rng, 2)
            w = random_form(s, rng)
            D = random_hermitian_derivation(s, rng)
            X = random_field(s, rng, LEFT_LINEAR)
            B = random_field(s, rng, BILINEAR)
            checks = {
                "sigma involution": sigma_can(sigma_can(t)) == t,
                "psi idempotent": junk_projection(junk_projection(t)) == junk_projection(t),
                "psi self-adjoint": adj(t) == junk_projection(t),
                "g sigma": quantum_metric_g(s, sigma_can(t)) == quantum_metric_g(s, t),
                "musical": all(flat(sharp(s, w, side), side) == w for side in (RIGHT, LEFT)),
                "phi": phi(phi_inverse(B)) == B,
                "dagger intertwining": dagger(affine_connection(c, D, X, LEFT)) == affine_connection(c, D, dagger(X), RIGHT),
            }
            wc = random_form(s, rng, central=True)
            checks["sharp coincide"] = sharp(s, wc, RIGHT) == sharp(s, wc, LEFT)
            bad.extend(f"{name}:{k}" for k, v in checks.items() if not v)
    A = QuantumTorus(FORMAL)
    rng = random.Random(66)

    def rand():
        return A.element({
            (rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-2, 2)): (mpq(rng.randint(-5, 5)), mpq(rng.randint(-5, 5)))
            for _ in range(rng.randint(1, 4))
        })

    reps = sum(rep_check(rand(), rand()) for _ in range(100))
    if reps != 100:
        bad.append(f"rep_check {reps}/100")
    return not bad, f"structural checks on {len(REGULAR)} specs, rep_check {reps}/100 at q=i, failures {sorted(set(bad)) or 'none'}"


def criterion_7():
    bad = []
    for name in FLAT:
        s = spec_named(name)
        R = curvature(levi_civita(s))
        if any(R(s.e(k)) != 0 for k in range(s.rank)):
            bad.append(f"{name}:not flat")
    s = spec_named("conformal_classical")
    R = curvature(levi_civita(s))
    expected = classical_curvature_oracle(s)
    if any(R(s.e(k)) != expected[k] for k in range(s.rank)):
        bad.append("conformal_classical:oracle")
    return not bad, f"R = 0 on {len(FLAT)} flat specs; conformal matches classical oracle; failures {bad or 'none'}"


CRITERIA = [
    (1, "classical-limit oracle agreement", criterion_1),
    (2, "existence property suite", criterion_2),
    (3, "uniqueness via exact solver", criterion_3),
    (4, "proof identities", criterion_4),
    (5, "duality cross-identities", criterion_5),
    (6, "structural suite", criterion_6),
    (7, "flat and conformal curvature", criterion_7),
]


def _line(n, title, ok, detail):
    return f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'} {title}: {detail}"


@pytest.mark.parametrize("n,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(n, title, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(n, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(n, title, *fn()) for n, title, fn in CRITERIA]
    for n, title, ok, detail in results:
        print(_line(n, title, ok, detail))
    sys.exit(0 if all(r[2] for r in results) else 1)
