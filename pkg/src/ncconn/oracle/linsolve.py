"""Sparse fraction-free Gaussian elimination over the integers.

Rows are ``{column: coefficient}`` dicts plus a right-hand side; the system is
``sum_c row[c] x_c = rhs``.  Rational input is cleared to integers first, and
each elimination step cross-multiplies and divides out the row content, so no
fractions appear until back-substitution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq, mpz, lcm

Row = Dict[int, mpz]


@dataclass
class LinearSolution:
    n_unknowns: int
    consistent: bool
    rank: int
    particular: Optional[List[mpq]] = None
    pivots: List[int] = field(default_factory=list)

    @property
    def kernel_dim(self) -> int:
        return self.n_unknowns - self.rank


def _integer_row(row: Dict[int, mpq], rhs: mpq) -> Tuple[Row, mpz]:
    dens = [v.denominator for v in row.values()] + [mpq(rhs).denominator]
    m = reduce(lcm, dens, mpz(1))
    out = {c: mpz(v * m) for c, v in row.items() if v}
    return out, mpz(mpq(rhs) * m)


def _primitive(row: Row, rhs: mpz) -> Tuple[Row, mpz]:
    g = reduce(gcd, [abs(int(v)) for v in row.values()] + [abs(int(rhs))], 0)
    if g > 1:
        row = {c: v // g for c, v in row.items()}
        rhs //= g
    return row, rhs


def solve(n_unknowns: int, equations: Sequence[Tuple[Dict[int, mpq], mpq]]) -> LinearSolution:
    """Exact rank, consistency and one particular solution (free variables = 0)."""
    pivot_rows: Dict[int, Tuple[Row, mpz]] = {}
    order: List[int] = []
    for row_q, rhs_q in equations:
        row, rhs = _integer_row(row_q, rhs_q)
        # reduce against existing pivots until the leading column is new
        while row:
            col = min(row)
            if col not in pivot_rows:
                break
            prow, prhs = pivot_rows[col]
            a, b = prow[col], row[col]
            new = {c: v * a for c, v in row.items()}
            for c, v in prow.items():
                nv = new.get(c, 0) - b * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            rhs = rhs * a - b * prhs
            row, rhs = _primitive(new, rhs)
        if not row:
            if rhs:
                return LinearSolution(n_unknowns, False, len(pivot_rows))
            continue
        row, rhs = _primitive(row, rhs)
        col = min(row)
        pivot_rows[col] = (row, rhs)
        order.append(col)

    # back substitution from the highest pivot column down
    x: List[mpq] = [mpq(0)] * n_unknowns
    for col in sorted(pivot_rows, reverse=True):
        row, rhs = pivot_rows[col]
        acc = mpq(rhs)
        for c, v in row.items():
            if c != col:
                acc -= v * x[c]
        x[col] = acc / row[col]
    return LinearSolution(n_unknowns, True, len(pivot_rows), x, sorted(pivot_rows))
