"""Classical Christoffel and Riemann data for commutative (q = 1) specs.

The bridge to classical geometry reads ``e_j = dx_j`` and ``d_j = d/dx_j``.
``H`` pairs one-forms, so it is the inverse of the tangent metric
``G = H^-1`` and ``G^{kl} = H_kl``.

Frozen convention (fixed by the flat case and the conformal and sheared
calibration specs, see the tests):

* ``Gamma_k[(i, j)] = -Gamma^k_{ij}``
* ``R(e_k)[(l, i, j)] = -1/2 R^k_{lij}`` with
  ``R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}``
"""

from __future__ import annotations

from itertools import product
from typing import Dict, List, Tuple

from gmpy2 import mpq

from ..algebra import Element
from ..connection import Connection, RIGHT
from ..forms import CalculusSpec, Tensor

HALF = (mpq(1, 2), mpq(0))
MINUS_HALF = (mpq(-1, 2), mpq(0))

Christoffel = List[List[List[Element]]]  # [k][i][j] -> Gamma^k_{ij}
Riemann = Dict[Tuple[int, int, int, int], Element]  # (l, k, i, j) -> R^l_{kij}


class ModeError(ValueError):
    """Raised when a classical oracle is asked about a formal-q spec."""


def _require_classical(spec: CalculusSpec) -> None:
    if spec.algebra.formal:
        raise ModeError("oracle requires q=1")


def christoffel_symbols(spec: CalculusSpec) -> Christoffel:
    """``Gamma^k_{ij} = 1/2 sum_l G^{kl} (d_i G_{jl} + d_j G_{il} - d_l G_{ij})``."""
    _require_classical(spec)
    r = spec.rank
    Gup = spec.metric
    G = spec.metric_inverse
    alg = spec.algebra
    dG = [[[G[a][b].partial(c + 1) for c in range(r)] for b in range(r)] for a in range(r)]
    out: Christoffel = []
    for k in range(r):
        rows = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = alg.zero
                for l in range(r):
                    if Gup[k][l]:
                        acc = acc + Gup[k][l] * (dG[j][l][i] + dG[i][l][j] - dG[i][j][l])
                row.append(acc.scale(HALF))
            rows.append(row)
        out.append(rows)
    return out


def koszul_oracle(spec: CalculusSpec) -> Connection:
    """Classical Levi-Civita connection in the engine's convention."""
    gam = christoffel_symbols(spec)
    r = spec.rank
    gs = tuple(
        spec.tensor(2, {(i, j): -gam[k][i][j] for i, j in product(range(r), repeat=2)})
        for k in range(r)
    )
    return Connection(spec, gs, RIGHT)


def classical_riemann(spec: CalculusSpec) -> Riemann:
    gam = christoffel_symbols(spec)
    r = spec.rank
    out: Riemann = {}
    for l, k, i, j in product(range(r), repeat=4):
        v = gam[l][j][k].partial(i + 1) - gam[l][i][k].partial(j + 1)
        for m in range(r):
            v = v + gam[l][i][m] * gam[m][j][k] - gam[l][j][m] * gam[m][i][k]
        out[(l, k, i, j)] = v
    return out


def classical_curvature_oracle(spec: CalculusSpec) -> List[Tensor]:
    """Expected ``R(e_k)`` for each k under the frozen convention."""
    R = classical_riemann(spec)
    r = spec.rank
    return [
        spec.tensor(3, {(l, i, j): R[(k, l, i, j)].scale(MINUS_HALF) for l, i, j in product(range(r), repeat=3)})
        for k in range(r)
    ]
