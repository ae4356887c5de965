"""Second-order structure: braiding, junk projection and the exterior derivative."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import List, Optional, Sequence

from gmpy2 import mpq

from .algebra import Element
from .forms import CalculusSpec, Tensor, dag, format_tensor, inner, quantum_metric_g

HALF = (mpq(1, 2), mpq(0))


def d0(spec: CalculusSpec, a: Element) -> Tensor:
    """``d a = sum_j e_j d_j(a)``."""
    a = spec.algebra.coerce(a)
    return spec.tensor(1, {(j,): a.partial(j + 1) for j in range(spec.rank)})


def sigma_can(s: Tensor) -> Tensor:
    if s.degree != 2:
        raise ValueError("sigma acts on two-tensors")
    return s.swap(0)


def junk_projection(s: Tensor) -> Tensor:
    """``Psi = (1 + sigma) / 2``."""
    return (s + sigma_can(s)).scale(HALF)


def antisym(s: Tensor) -> Tensor:
    """``(1 - Psi) s``."""
    return (s - sigma_can(s)).scale(HALF)


def P(t: Tensor) -> Tensor:
    """``Psi (x) 1`` on three-tensors."""
    return (t + t.swap(0)).scale(HALF)


def Q(t: Tensor) -> Tensor:
    """``1 (x) Psi`` on three-tensors."""
    return (t + t.swap(1)).scale(HALF)


def d1(spec: CalculusSpec, omega: Tensor) -> Tensor:
    """``d(e_j a) = de_j a - (1 - Psi)(e_j (x) da)``."""
    if omega.degree != 1:
        raise ValueError("d1 acts on one-forms")
    out = spec.tensor(2)
    for (j,), a in omega.coeffs.items():
        ej = spec.e(j)
        out = out + spec.basis_differentials[j] * a - antisym(ej.otimes(d0(spec, a)))
    return out


# ---------------------------------------------------------------------------


@dataclass
class AxiomResult:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class AxiomReport:
    results: List[AxiomResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def add(self, name: str, witness: Optional[str]) -> None:
        self.results.append(AxiomResult(name, witness is None, witness or ""))

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


def _first(cases) -> Optional[str]:
    for ok, witness in cases:
        if not ok:
            return witness
    return None


def check_centred_axioms(spec: CalculusSpec, samples: Optional[Sequence[Element]] = None) -> AxiomReport:
    """Evaluate every calculus axiom on basis tensors times ``samples``."""
    from .sampling import probes

    alg = spec.algebra
    r = spec.rank
    samples = list(samples) if samples is not None else probes(alg)
    two = [Tensor.basis(alg, r, idx, a) for idx in product(range(r), repeat=2) for a in samples]
    rep = AxiomReport()

    rep.add("metric central", _first(
        (spec.metric[i][j].is_central(), f"H{i + 1}{j + 1} = {spec.metric[i][j]}")
        for i, j in product(range(r), repeat=2)
    ))
    rep.add("metric hermitian", _first(
        (spec.metric[i][j].star() == spec.metric[j][i], f"H{i + 1}{j + 1}* != H{j + 1}{i + 1}")
        for i, j in product(range(r), repeat=2)
    ))
    rep.add("strong non-degeneracy", _first(
        (
            sum((spec.metric[i][l] * spec.metric_inverse[l][j] for l in range(r)), alg.zero)
            == (alg.one if i == j else alg.zero),
            f"(H Hinv){i + 1}{j + 1} wrong",
        )
        for i, j in product(range(r), repeat=2)
    ))
    rep.add("dagger derivation", _first(
        (d0(spec, a.star()) == -dag(spec, d0(spec, a)), f"a = {a}") for a in samples
    ))
    rep.add("g symmetric", _first(
        (quantum_metric_g(spec, sigma_can(s)) == quantum_metric_g(spec, s),
         f"g(sigma({format_tensor(s)})) = {quantum_metric_g(spec, sigma_can(s))} "
         f"but g({format_tensor(s)}) = {quantum_metric_g(spec, s)}")
        for s in two
    ))
    rep.add("sigma involution", _first(
        (sigma_can(sigma_can(s)) == s, format_tensor(s)) for s in two
    ))
    rep.add("psi idempotent", _first(
        (junk_projection(junk_projection(s)) == junk_projection(s), format_tensor(s)) for s in two
    ))
    rep.add("psi self-adjoint", _first(
        (inner(spec, junk_projection(s), t) == inner(spec, s, junk_projection(t)),
         f"{format_tensor(s)}, {format_tensor(t)}")
        for s in two for t in spec.basis(2)
    ))
    rep.add("psi commutes with dagger", _first(
        (junk_projection(dag(spec, s)) == dag(spec, junk_projection(s)), format_tensor(s)) for s in two
    ))
    rep.add("junk in image of psi", _first(
        (not d1(spec, d0(spec, a)), f"d1(d0({a})) = {format_tensor(d1(spec, d0(spec, a)))}")
        for a in samples
    ))
    rep.add("de in image of 1 - psi", _first(
        (not junk_projection(spec.basis_differentials[j]), f"de{j + 1}") for j in range(r)
    ))
    return rep
