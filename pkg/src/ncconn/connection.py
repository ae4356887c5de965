"""Connections on one-forms, their defects and curvature.

A right connection is fixed by ``Gamma_k = nabla(e_k)``; Leibniz gives
``nabla(e_k a) = Gamma_k a + e_k (x) da``.  A left connection stores
``Gamma'_k`` with ``nabla(a e_k) = a Gamma'_k + da (x) e_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .algebra import Element
from .calculus import HALF, P, Q, antisym, d0, d1, sigma_can
from .forms import (
    CalculusSpec,
    GeneratingPair,
    Tensor,
    alpha_right,
    canonical_generating_pair,
    dag,
    format_tensor,
    inner,
)

RIGHT = "right"
LEFT = "left"
FOUR = (mpq(4), mpq(0))


@dataclass(frozen=True)
class Connection:
    spec: CalculusSpec
    gammas: Tuple[Tensor, ...]
    orientation: str = RIGHT

    def __post_init__(self):
        if self.orientation not in (RIGHT, LEFT):
            raise ValueError(f"orientation must be 'right' or 'left', got {self.orientation!r}")
        if len(self.gammas) != self.spec.rank or any(g.degree != 2 for g in self.gammas):
            raise ValueError("need one two-tensor per basis form")

    def __call__(self, omega: Tensor) -> Tensor:
        spec = self.spec
        out = spec.tensor(2)
        for (k,), a in omega.coeffs.items():
            ek = spec.e(k)
            if self.orientation == RIGHT:
                out = out + self.gammas[k] * a + ek.otimes(d0(spec, a))
            else:
                out = out + a * self.gammas[k] + d0(spec, a).otimes(ek)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Connection):
            return NotImplemented
        return self.orientation == other.orientation and all(a == b for a, b in zip(self.gammas, other.gammas))

    __hash__ = None  # type: ignore[assignment]

    def perturbed(self, k: int, delta: Tensor) -> "Connection":
        gs = list(self.gammas)
        gs[k] = gs[k] + delta
        return Connection(self.spec, tuple(gs), self.orientation)

    def describe(self) -> List[str]:
        name = "Gamma" if self.orientation == RIGHT else "Gamma'"
        return [f"{name}_{k + 1} = {format_tensor(g)}" for k, g in enumerate(self.gammas)]


def zero_connection(spec: CalculusSpec, orientation: str = RIGHT) -> Connection:
    return Connection(spec, tuple(spec.tensor(2) for _ in range(spec.rank)), orientation)


def conjugate(c: Connection) -> Connection:
    """``-dagger . nabla . dagger``: ``Gamma'_k = -eps_k Gamma_k^dagger`` (and back)."""
    spec = c.spec
    gs = []
    for k, gk in enumerate(c.gammas):
        gd = dag(spec, gk)
        gs.append(-gd if spec.dagger_signs[k] > 0 else gd)
    return Connection(spec, tuple(gs), LEFT if c.orientation == RIGHT else RIGHT)


def _right(c: Connection) -> Connection:
    return c if c.orientation == RIGHT else conjugate(c)


def _left(c: Connection) -> Connection:
    return c if c.orientation == LEFT else conjugate(c)


# ---------------------------------------------------------------------------
# one-form valued pairings


def pair_form_tensor(spec: CalculusSpec, omega: Tensor, alpha: Tensor) -> Tensor:
    """``<omega, eta (x) rho> = <omega, eta> rho``."""
    out = spec.tensor(1)
    for (i, j), c in alpha.coeffs.items():
        out = out + spec.e(j, inner(spec, omega, spec.e(i)) * c)
    return out


def pair_tensor_form(spec: CalculusSpec, alpha: Tensor, omega: Tensor) -> Tensor:
    """``<eta (x) rho, omega> = rho^dagger <eta, omega>``."""
    out = spec.tensor(1)
    for (i, j), c in alpha.coeffs.items():
        v = c.star() * inner(spec, spec.e(i), omega)
        out = out + spec.e(j, v if spec.dagger_signs[j] > 0 else -v)
    return out


def _probe_forms(spec: CalculusSpec, samples: Optional[Sequence[Element]]) -> List[Tensor]:
    from .sampling import probes

    samples = list(samples) if samples is not None else probes(spec.algebra)
    return [spec.e(k, a) for k in range(spec.rank) for a in samples]


def hermitian_defect(c: Connection, x: Tensor, y: Tensor) -> Tensor:
    """``-<nabla x, y> + <x, nabla y> - d<x, y>``."""
    c = _right(c)
    spec = c.spec
    return (
        pair_form_tensor(spec, x, c(y))
        - pair_tensor_form(spec, c(x), y)
        - d0(spec, inner(spec, x, y))
    )


def hermitian_witness(c: Connection, samples: Optional[Sequence[Element]] = None) -> Optional[str]:
    forms = _probe_forms(c.spec, samples)
    for x in forms:
        for y in forms:
            dft = hermitian_defect(c, x, y)
            if dft:
                return f"x = {format_tensor(x)}, y = {format_tensor(y)}: defect {format_tensor(dft)}"
    return None


def is_hermitian(c: Connection, samples: Optional[Sequence[Element]] = None) -> bool:
    return hermitian_witness(c, samples) is None


def torsion(c: Connection) -> Callable[[Tensor], Tensor]:
    """``(1 - Psi) nabla + d`` (right) or ``(1 - Psi) nabla - d`` (left)."""
    spec = c.spec
    if c.orientation == RIGHT:
        return lambda w: antisym(c(w)) + d1(spec, w)
    return lambda w: antisym(c(w)) - d1(spec, w)


def torsion_witness(c: Connection, samples: Optional[Sequence[Element]] = None) -> Optional[str]:
    T = torsion(c)
    for w in _probe_forms(c.spec, samples):
        t = T(w)
        if t:
            return f"T({format_tensor(w)}) = {format_tensor(t)}"
    return None


def is_torsion_free(c: Connection, samples: Optional[Sequence[Element]] = None) -> bool:
    return torsion_witness(c, samples) is None


def bimodule_witness(c: Connection, samples: Optional[Sequence[Element]] = None) -> Optional[str]:
    r = _right(c)
    l = conjugate(r)
    for w in _probe_forms(c.spec, samples):
        lhs = sigma_can(r(w))
        rhs = l(w)
        if lhs != rhs:
            return f"sigma(nabla({format_tensor(w)})) - conjugate = {format_tensor(lhs - rhs)}"
    return None


def is_bimodule_connection(c: Connection, samples: Optional[Sequence[Element]] = None) -> bool:
    return bimodule_witness(c, samples) is None


# ---------------------------------------------------------------------------
# constructions


def grassmann_connection(spec: CalculusSpec, gp: Optional[GeneratingPair] = None) -> Connection:
    """``1/2 sum x_i (x) d<x'_i, w> + x'_i (x) d<x_i, w>`` evaluated on the basis."""
    gp = gp or canonical_generating_pair(spec)
    gs = []
    for k in range(spec.rank):
        ek = spec.e(k)
        acc = spec.tensor(2)
        for x, y in gp:
            acc = acc + x.otimes(d0(spec, inner(spec, y, ek))) + y.otimes(d0(spec, inner(spec, x, ek)))
        gs.append(acc.scale(HALF))
    return Connection(spec, tuple(gs), RIGHT)


def W_tensor(spec: CalculusSpec, gp: Optional[GeneratingPair] = None) -> Tensor:
    """``W = 1/2 sum d x_i (x) x'_i^dagger + d x'_i (x) x_i^dagger``."""
    gp = gp or canonical_generating_pair(spec)
    acc = spec.tensor(3)
    for x, y in gp:
        acc = acc + d1(spec, x).otimes(dag(spec, y)) + d1(spec, y).otimes(dag(spec, x))
    return acc.scale(HALF)


def correction_tensor(spec: CalculusSpec, gp: Optional[GeneratingPair] = None) -> Tensor:
    """``(1 + 4PQ) W``."""
    W = W_tensor(spec, gp)
    return W + P(Q(W)).scale(FOUR)


def levi_civita(spec: CalculusSpec, gp: Optional[GeneratingPair] = None) -> Connection:
    """Grassmann connection minus ``alpha((1 + 4PQ) W)``."""
    gp = gp or canonical_generating_pair(spec)
    base = grassmann_connection(spec, gp)
    corr = alpha_right(spec, correction_tensor(spec, gp), 1)
    gs = tuple(base.gammas[k] - corr(spec.e(k)) for k in range(spec.rank))
    return Connection(spec, gs, RIGHT)


# ---------------------------------------------------------------------------
# curvature


def curvature(c: Connection) -> Callable[[Tensor], Tensor]:
    """Right: ``(1 (x) (1-Psi))(nabla (x) 1 + 1 (x) d) nabla``; left: mirrored."""
    spec = c.spec
    if c.orientation == RIGHT:

        def R(omega: Tensor) -> Tensor:
            out = spec.tensor(3)
            for i, rho in c(omega).components(0).items():
                out = out + c.gammas[i].otimes(rho) + spec.e(i).otimes(d1(spec, rho))
            return (out - out.swap(1)).scale(HALF)

        return R

    def L(omega: Tensor) -> Tensor:
        out = spec.tensor(3)
        for j, lam in c(omega).components(-1).items():
            out = out + lam.otimes(c.gammas[j]) - d1(spec, lam).otimes(spec.e(j))
        return (out - out.swap(0)).scale(HALF)

    return L
