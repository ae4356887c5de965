"""Exact 4x4 clock-and-shift representation at ``q = i``.

``pi(U) = diag(1, i, -1, -i)`` and ``pi(V) = S`` with ``S e_k = e_{k-1 mod 4}``,
so that ``pi(V) pi(U) = i pi(U) pi(V)``.  Both are unitary, so ``*`` maps to
the conjugate transpose.  Used to cross-check multiplication and the star.
"""

from __future__ import annotations

from typing import Callable, List, Optional

from .gauss import G, G0, G1, gadd, gconj, gmul, ipow
from .torus import Element

Matrix = List[List[G]]
N = 4


def identity() -> Matrix:
    return [[G1 if r == c else G0 for c in range(N)] for r in range(N)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    out = [[G0] * N for _ in range(N)]
    for r in range(N):
        for k in range(N):
            x = a[r][k]
            if x[0] or x[1]:
                row = b[k]
                for c in range(N):
                    y = row[c]
                    if y[0] or y[1]:
                        out[r][c] = gadd(out[r][c], gmul(x, y))
    return out


def adjoint(a: Matrix) -> Matrix:
    return [[gconj(a[c][r]) for c in range(N)] for r in range(N)]


def clock_power(m: int) -> Matrix:
    return [[ipow(m * r) if r == c else G0 for c in range(N)] for r in range(N)]


def shift_power(n: int) -> Matrix:
    # S has ones at (k-1, k): the superdiagonal plus the corner (3, 0)
    return [[G1 if (c - r - n) % N == 0 else G0 for c in range(N)] for r in range(N)]


def represent(x: Element) -> Matrix:
    if x.den:
        raise ValueError("the representation is defined on Laurent polynomials only")
    out = [[G0] * N for _ in range(N)]
    for (m, n, t), c in x.terms.items():
        coeff = gmul(c, ipow(t)) if x.alg.formal else c
        mono = matmul(clock_power(m), shift_power(n))
        for r in range(N):
            for col in range(N):
                v = mono[r][col]
                if v[0] or v[1]:
                    out[r][col] = gadd(out[r][col], gmul(coeff, v))
    return out


def rep_check(a: Element, b: Element, mul: Optional[Callable[[Element, Element], Element]] = None) -> bool:
    """True iff ``pi(ab) = pi(a) pi(b)`` and ``pi(a*) = pi(a)^dagger``.

    ``mul`` overrides the product under test (defaults to ``a * b``).
    """
    prod = mul(a, b) if mul is not None else a * b
    if represent(prod) != matmul(represent(a), represent(b)):
        return False
    return represent(a.star()) == adjoint(represent(a))
