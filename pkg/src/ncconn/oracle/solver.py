"""Exact search for Levi-Civita connections inside a finite support box.

Each Christoffel coefficient ``Gamma_k[(i, j)]`` is an unknown combination

    sum (x + i y) q^t U^m V^n D^-K,   |m|, |n| <= B,  |t| <= qbound

where ``D`` is the localising element (``K = 0`` without one).  The
Hermitian defect is antilinear in one argument, so the system is linear over
Q in the real and imaginary parts ``x, y`` and is solved there.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from ..algebra import Element
from ..calculus import sigma_can
from ..connection import Connection, RIGHT, conjugate, hermitian_defect, torsion, zero_connection
from ..forms import CalculusSpec, Index
from ..sampling import probes
from .linsolve import LinearSolution, solve

HERMITIAN = "hermitian"
TORSION = "torsion"
BIMODULE = "bimodule"
ALL_CONSTRAINTS = (HERMITIAN, TORSION, BIMODULE)

Unknown = Tuple[int, Index, int, int, int, int]  # k, (i, j), m, n, t, part


@dataclass
class ConnectionSpace:
    """Affine solution set ``particular + kernel`` of the constraint system."""

    spec: CalculusSpec
    bound: int
    qbound: int
    den_power: int
    constraints: Tuple[str, ...]
    n_unknowns: int
    n_equations: int
    consistent: bool
    rank: int
    particular: Optional[Connection]

    @property
    def dimension(self) -> int:
        """Real dimension of the solution set (``-1`` when empty)."""
        return self.n_unknowns - self.rank if self.consistent else -1

    @property
    def is_singleton(self) -> bool:
        return self.consistent and self.dimension == 0

    @property
    def solutions(self) -> List[Connection]:
        """The solution when it is unique; empty when none exists.

        Raises for positive-dimensional solution sets, which are not finite.
        """
        if not self.consistent:
            return []
        if self.dimension:
            raise ValueError(f"solution set has real dimension {self.dimension}")
        return [self.particular]


def _unknowns(spec: CalculusSpec, bound: int, qbound: int) -> List[Unknown]:
    r = spec.rank
    tr = range(-qbound, qbound + 1) if spec.algebra.formal else range(0, 1)
    box = range(-bound, bound + 1)
    return [
        (k, ij, m, n, t, part)
        for k in range(r)
        for ij in product(range(r), repeat=2)
        for m in box
        for n in box
        for t in tr
        for part in (0, 1)
    ]


def _unit_value(spec: CalculusSpec, u: Unknown, den_power: int) -> Element:
    _, _, m, n, t, part = u
    coeff = (mpq(0), mpq(1)) if part else (mpq(1), mpq(0))
    mono = spec.algebra.monomial(m, n, t, coeff)
    if den_power:
        return spec.algebra.element(mono.terms, den_power)
    return mono


def _constraint_values(c: Connection, constraints: Sequence[str], samples: Sequence[Element]) -> List[Element]:
    spec = c.spec
    vals: List[Element] = []
    r = spec.rank
    if HERMITIAN in constraints:
        # the defect is sesquilinear, so basis pairs suffice
        for i, j in product(range(r), repeat=2):
            t = hermitian_defect(c, spec.e(i), spec.e(j))
            vals.extend(t[(p,)] for p in range(r))
    if TORSION in constraints:
        T = torsion(c)
        for k in range(r):
            t = T(spec.e(k))
            vals.extend(t[idx] for idx in product(range(r), repeat=2))
    if BIMODULE in constraints:
        left = conjugate(c)
        for k in range(r):
            for a in samples:
                w = spec.e(k, a)
                t = sigma_can(c(w)) - left(w)
                vals.extend(t[idx] for idx in product(range(r), repeat=2))
    return vals


def _with_entry(spec: CalculusSpec, k: int, ij: Index, value: Element) -> Connection:
    gs = [spec.tensor(2) for _ in range(spec.rank)]
    gs[k] = spec.tensor(2, {ij: value})
    return Connection(spec, tuple(gs), RIGHT)


def solve_connection_space(
    spec: CalculusSpec,
    bound: int,
    qbound: int = 0,
    den_power: Optional[int] = None,
    constraints: Sequence[str] = ALL_CONSTRAINTS,
    samples: Optional[Sequence[Element]] = None,
) -> ConnectionSpace:
    alg = spec.algebra
    if den_power is None:
        den_power = 1 if alg.denominator is not None else 0
    if den_power and alg.denominator is None:
        raise ValueError("a denominator power needs a localised algebra")
    constraints = tuple(c for c in ALL_CONSTRAINTS if c in constraints)
    samples = list(samples) if samples is not None else probes(alg)
    unknowns = _unknowns(spec, bound, qbound)

    base = _constraint_values(zero_connection(spec), constraints, samples)
    columns: List[List[Element]] = []
    for u in unknowns:
        k, ij = u[0], u[1]
        vals = _constraint_values(_with_entry(spec, k, ij, _unit_value(spec, u, den_power)), constraints, samples)
        columns.append([v - b for v, b in zip(vals, base)])

    top = max([v.den for v in base] + [v.den for col in columns for v in col] + [0])
    # equation rows keyed by (constraint slot, monomial, real/imag part)
    rows: Dict[Tuple[int, Tuple[int, int, int], int], Dict[int, mpq]] = {}
    rhs: Dict[Tuple[int, Tuple[int, int, int], int], mpq] = {}
    for slot, v in enumerate(base):
        for key, c in alg._lift(v, top).items():
            for part in (0, 1):
                if c[part]:
                    rhs[(slot, key, part)] = -c[part]
    for col, vals in enumerate(columns):
        for slot, v in enumerate(vals):
            if not v:
                continue
            for key, c in alg._lift(v, top).items():
                for part in (0, 1):
                    if c[part]:
                        rows.setdefault((slot, key, part), {})[col] = c[part]
    keys = sorted(set(rows) | set(rhs))
    equations = [(rows.get(key, {}), rhs.get(key, mpq(0))) for key in keys]
    sol: LinearSolution = solve(len(unknowns), equations)

    particular = None
    if sol.consistent:
        gs: List[Dict[Index, Element]] = [dict() for _ in range(spec.rank)]
        for u, x in zip(unknowns, sol.particular):
            if x:
                k, ij = u[0], u[1]
                term = _unit_value(spec, u, den_power) * x
                gs[k][ij] = gs[k][ij] + term if ij in gs[k] else term
        particular = Connection(spec, tuple(spec.tensor(2, g) for g in gs), RIGHT)
    return ConnectionSpace(
        spec, bound, qbound, den_power, constraints, len(unknowns), len(equations),
        sol.consistent, sol.rank, particular,
    )


def fits_box(c: Connection, bound: int, qbound: int = 0, den_power: int = 0) -> bool:
    """True when every Christoffel coefficient is expressible in the box."""
    alg = c.spec.algebra
    for g in c.gammas:
        for v in g.coeffs.values():
            if v.den > den_power:
                return False
            for m, n, t in alg._lift(v, den_power) if den_power else v.terms:
                if abs(m) > bound or abs(n) > bound or abs(t) > qbound:
                    return False
    return True
