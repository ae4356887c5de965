"""Free bimodules of one-forms with a central basis ``e_1 .. e_r``.

A tensor of degree k is stored as ``{(j_1, ..., j_k): a}`` meaning
``sum e_{j_1} (x) ... (x) e_{j_k} a`` with 0-based indices.  Because the basis
is central, left and right coefficients coincide and every bimodule operation
acts on coefficients only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra import Element, NotInvertible, QuantumTorus
from .algebra.gauss import G, G0, G1, gconj, ginv, gmul, gsub

Index = Tuple[int, ...]


class SpecError(ValueError):
    """Invalid calculus data, located by ``(section, key)``."""

    def __init__(self, section: str, key: str, reason: str):
        self.section = section
        self.key = key
        self.reason = reason
        super().__init__(f"[{section}] {key}: {reason}")


class GeneratingPairError(ValueError):
    pass


class Tensor:
    """Element of the k-th tensor power of the one-forms (k >= 1)."""

    __slots__ = ("alg", "rank", "degree", "coeffs")

    def __init__(self, alg: QuantumTorus, rank: int, degree: int, coeffs: Optional[Mapping[Index, Element]] = None):
        self.alg = alg
        self.rank = rank
        self.degree = degree
        self.coeffs: Dict[Index, Element] = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def basis(cls, alg: QuantumTorus, rank: int, index: Index, coeff: Optional[Element] = None) -> "Tensor":
        return cls(alg, rank, len(index), {tuple(index): alg.one if coeff is None else coeff})

    def _like(self, coeffs: Mapping[Index, Element]) -> "Tensor":
        return Tensor(self.alg, self.rank, self.degree, coeffs)

    def zero_like(self) -> "Tensor":
        return self._like({})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, index: Index) -> Element:
        return self.coeffs.get(tuple(index), self.alg.zero)

    def items(self) -> List[Tuple[Index, Element]]:
        return sorted(self.coeffs.items())

    def _check(self, other: "Tensor") -> None:
        if not isinstance(other, Tensor) or other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {getattr(other, 'degree', None)}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return self._like(out)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def __neg__(self) -> "Tensor":
        return self._like({k: -v for k, v in self.coeffs.items()})

    def __mul__(self, a) -> "Tensor":
        """Right action ``t a``."""
        if isinstance(a, Tensor):
            return NotImplemented
        return self._like({k: v * a for k, v in self.coeffs.items()})

    def __rmul__(self, a) -> "Tensor":
        """Left action ``a t``; the basis is central so ``a`` lands on the coefficient."""
        return self._like({k: a * v for k, v in self.coeffs.items()})

    def scale(self, c: G) -> "Tensor":
        return self._like({k: v.scale(c) for k, v in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def otimes(self, other: "Tensor") -> "Tensor":
        out: Dict[Index, Element] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = a * b
        return Tensor(self.alg, self.rank, self.degree + other.degree, out)

    def swap(self, pos: int) -> "Tensor":
        """Exchange tensor slots ``pos`` and ``pos + 1`` (0-based)."""
        out: Dict[Index, Element] = {}
        for k, v in self.coeffs.items():
            kk = list(k)
            kk[pos], kk[pos + 1] = kk[pos + 1], kk[pos]
            out[tuple(kk)] = v
        return self._like(out)

    def map_coeffs(self, fn: Callable[[Element], Element]) -> "Tensor":
        return self._like({k: fn(v) for k, v in self.coeffs.items()})

    def components(self, slot: int = 0) -> Dict[int, "Tensor"]:
        """Split ``t = sum_i e_i (x) rho_i`` (slot 0) or ``sum_i lambda_i (x) e_i`` (last slot)."""
        parts: Dict[int, Dict[Index, Element]] = {}
        for k, v in self.coeffs.items():
            if slot == 0:
                parts.setdefault(k[0], {})[k[1:]] = v
            else:
                parts.setdefault(k[-1], {})[k[:-1]] = v
        return {i: Tensor(self.alg, self.rank, self.degree - 1, c) for i, c in parts.items()}

    def __repr__(self) -> str:
        return f"Tensor[{self.degree}]({format_tensor(self)})"


def format_tensor(t: Tensor) -> str:
    if not t.coeffs:
        return "0"
    return " + ".join(
        "*".join(f"e{i + 1}" for i in k) + f"*({v})" for k, v in t.items()
    )


def indices(rank: int, degree: int) -> Iterable[Index]:
    return product(range(rank), repeat=degree)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CalculusSpec:
    """Presentation of a centred Hermitian calculus with central basis.

    ``d(a) = sum_j e_j d_j(a)`` uses the basic derivations of the torus, so the
    rank is fixed at 2.  Build instances with :meth:`create`, which validates.
    """

    algebra: QuantumTorus
    rank: int
    dagger_signs: Tuple[int, ...]
    metric: Tuple[Tuple[Element, ...], ...]
    metric_inverse: Tuple[Tuple[Element, ...], ...]
    basis_differentials: Tuple[Tensor, ...]
    name: str = ""

    @classmethod
    def create(
        cls,
        algebra: QuantumTorus,
        metric: Sequence[Sequence[Element]],
        dagger_signs: Optional[Sequence[int]] = None,
        basis_differentials: Optional[Sequence[Optional[Tensor]]] = None,
        metric_inverse: Optional[Sequence[Sequence[Element]]] = None,
        name: str = "",
    ) -> "CalculusSpec":
        rank = len(metric)
        if rank != 2:
            raise SpecError("module", "rank", f"the derivation map d = e1 d1 + e2 d2 needs rank 2, got {rank}")
        for i, row in enumerate(metric):
            if len(row) != rank:
                raise SpecError("metric", f"H{i + 1}*", f"row has {len(row)} entries, expected {rank}")
        signs = tuple(dagger_signs) if dagger_signs is not None else (-1,) * rank
        if len(signs) != rank or any(s not in (1, -1) for s in signs):
            raise SpecError("module", "dagger_signs", f"need {rank} values from {{+1, -1}}, got {signs}")
        H = tuple(tuple(algebra.coerce(x) for x in row) for row in metric)
        for i, j in product(range(rank), repeat=2):
            key = f"H{i + 1}{j + 1}"
            if not H[i][j].is_central():
                raise SpecError("metric", key, f"entry {H[i][j]} is not central")
            if H[i][j].star() != H[j][i]:
                raise SpecError("metric", key, f"not Hermitian: H{i + 1}{j + 1}* = {H[i][j].star()} but H{j + 1}{i + 1} = {H[j][i]}")
        if metric_inverse is None:
            K = _inverse_2x2(H)
        else:
            K = tuple(tuple(algebra.coerce(x) for x in row) for row in metric_inverse)
        for i, j in product(range(rank), repeat=2):
            want = algebra.one if i == j else algebra.zero
            hk = sum((H[i][l] * K[l][j] for l in range(rank)), algebra.zero)
            kh = sum((K[i][l] * H[l][j] for l in range(rank)), algebra.zero)
            if hk != want or kh != want:
                raise SpecError("metric", f"Hinv{i + 1}{j + 1}", "H * Hinv is not the identity")
        de: List[Tensor] = []
        for j in range(rank):
            t = basis_differentials[j] if basis_differentials and basis_differentials[j] is not None else None
            t = t if t is not None else Tensor(algebra, rank, 2)
            if t.degree != 2:
                raise SpecError("differential", f"de{j + 1}", "must be a two-tensor")
            if t + t.swap(0):
                raise SpecError("differential", f"de{j + 1}", "must lie in the image of 1 - Psi (antisymmetric)")
            de.append(t)
        spec = cls(algebra, rank, signs, H, K, tuple(de), name)
        from .calculus import d0
        from .sampling import probes

        for a in probes(algebra):
            lhs = d0(spec, a.star())
            rhs = -dag(spec, d0(spec, a))
            if lhs != rhs:
                raise SpecError(
                    "module", "dagger_signs",
                    f"d is not a dagger-derivation: d(a*) != -d(a)^dagger for a = {a}",
                )
        return spec

    @property
    def r(self) -> int:
        return self.rank

    def e(self, j: int, coeff: Optional[Element] = None) -> Tensor:
        """Basis form ``e_{j+1}`` (0-based ``j``), optionally times ``coeff``."""
        return Tensor.basis(self.algebra, self.rank, (j,), coeff)

    def basis(self, degree: int) -> List[Tensor]:
        return [Tensor.basis(self.algebra, self.rank, idx) for idx in indices(self.rank, degree)]

    def tensor(self, degree: int, coeffs: Optional[Mapping[Index, Element]] = None) -> Tensor:
        return Tensor(self.algebra, self.rank, degree, coeffs)

    def sign(self, index: Index) -> int:
        s = 1
        for j in index:
            s *= self.dagger_signs[j]
        return s

    def metric_product(self, left: Index, right: Index) -> Element:
        out = self.algebra.one
        for a, b in zip(left, right):
            h = self.metric[a][b]
            if not h:
                return self.algebra.zero
            out = out * h
        return out


def _inverse_2x2(H) -> Tuple[Tuple[Element, ...], ...]:
    det = H[0][0] * H[1][1] - H[0][1] * H[1][0]
    try:
        di = det.inverse()
    except NotInvertible:
        raise SpecError(
            "metric", "H",
            f"determinant {det} is not invertible over the centre; localise at it in [algebra] or supply Hinv entries",
        ) from None
    return ((H[1][1] * di, -H[0][1] * di), (-H[1][0] * di, H[0][0] * di))


# ---------------------------------------------------------------------------
# inner product, dagger, metric g


def inner(spec: CalculusSpec, s: Tensor, t: Tensor) -> Element:
    """Right inner product, conjugate-linear in ``s``."""
    if isinstance(s, Element) and isinstance(t, Element):
        return s.star() * t
    if s.degree != t.degree:
        raise ValueError(f"degree mismatch: {s.degree} vs {t.degree}")
    out = spec.algebra.zero
    for i, a in s.coeffs.items():
        a_star = a.star()
        for j, b in t.coeffs.items():
            h = spec.metric_product(i, j)
            if h:
                out = out + a_star * h * b
    return out


def dag(spec: CalculusSpec, t: Union[Tensor, Element]) -> Union[Tensor, Element]:
    if isinstance(t, Element):
        return t.star()
    out = {}
    for k, v in t.coeffs.items():
        c = v.star()
        out[k[::-1]] = c if spec.sign(k) > 0 else -c
    return t._like(out)


def quantum_metric_g(spec: CalculusSpec, s: Tensor) -> Element:
    if s.degree != 2:
        raise ValueError("g is defined on two-tensors")
    out = spec.algebra.zero
    for (i, j), c in s.coeffs.items():
        h = spec.metric[i][j]
        if h:
            term = h * c
            out = out - term if spec.dagger_signs[i] > 0 else out + term
    return out


# ---------------------------------------------------------------------------
# generating pairs


@dataclass(frozen=True)
class GeneratingPair:
    pairs: Tuple[Tuple[Tensor, Tensor], ...]

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def check_generating_pair(spec: CalculusSpec, gp: GeneratingPair) -> List[str]:
    """Failed invariants, as messages (empty when the pair is valid)."""
    from .calculus import d0

    problems: List[str] = []
    for x, y in gp:
        for f in (x, y):
            if not all(c.is_central() for c in f.coeffs.values()):
                problems.append(f"non-central generator {format_tensor(f)}")
    for k in range(spec.rank):
        w = spec.e(k)
        a = sum((x * inner(spec, y, w) for x, y in gp), w.zero_like())
        b = sum((y * inner(spec, x, w) for x, y in gp), w.zero_like())
        if a != w:
            problems.append(f"sum x_i <x'_i, e{k + 1}> != e{k + 1}")
        if b != w:
            problems.append(f"sum x'_i <x_i, e{k + 1}> != e{k + 1}")
        lhs = sum((x.otimes(d0(spec, inner(spec, y, w))) for x, y in gp), spec.tensor(2))
        rhs = sum(
            (dag(spec, x).otimes(d0(spec, inner(spec, dag(spec, y), w))) for x, y in gp),
            spec.tensor(2),
        )
        if lhs != rhs:
            problems.append(f"dagger-compatibility fails on e{k + 1}")
    return problems


def generating_pair_from_basis(spec: CalculusSpec, M: Sequence[Sequence[G]]) -> GeneratingPair:
    """Pair ``(f_i, f'_i)`` for the basis ``f_i = sum_j e_j M_ji``.

    ``f'_i = sum_j e_j N_ji`` with ``N = Hinv (M^-1)^dagger``, which makes
    ``<f'_i, f_k> = delta_ik``.  ``M`` must be an invertible constant matrix.
    """
    alg = spec.algebra
    r = spec.rank
    det = gsub(gmul(M[0][0], M[1][1]), gmul(M[0][1], M[1][0]))
    if det == G0:
        raise GeneratingPairError("basis change matrix is singular")
    di = ginv(det)
    Minv = (
        (gmul(M[1][1], di), gmul((-M[0][1][0], -M[0][1][1]), di)),
        (gmul((-M[1][0][0], -M[1][0][1]), di), gmul(M[0][0], di)),
    )
    # (M^-1)^dagger
    Mid = [[gconj(Minv[c][r_]) for c in range(r)] for r_ in range(r)]
    pairs = []
    for i in range(r):
        f = spec.tensor(1, {(j,): alg.scalar(*M[j][i]) for j in range(r)})
        coeffs = {}
        for j in range(r):
            acc = alg.zero
            for l in range(r):
                acc = acc + spec.metric_inverse[j][l].scale(Mid[l][i])
            coeffs[(j,)] = acc
        pairs.append((f, spec.tensor(1, coeffs)))
    gp = GeneratingPair(tuple(pairs))
    problems = check_generating_pair(spec, gp)
    if problems:
        raise GeneratingPairError("; ".join(problems))
    return gp


def canonical_generating_pair(spec: CalculusSpec) -> GeneratingPair:
    """``(e_i, sum_j e_j K_ji)`` with ``K`` the inverse metric."""
    return generating_pair_from_basis(spec, [[G1, G0], [G0, G1]])


def product_pair(spec: CalculusSpec, gp: GeneratingPair, k: int) -> List[Tuple[Tensor, Tensor]]:
    """Generating pair of the k-th tensor power, factors in matching order."""
    out = []
    for combo in product(gp.pairs, repeat=k):
        x, y = combo[0]
        for a, b in combo[1:]:
            x, y = x.otimes(a), y.otimes(b)
        out.append((x, y))
    return out


# ---------------------------------------------------------------------------
# alpha maps and adjoints


TensorMap = Callable[[Tensor], Union[Tensor, Element]]


def alpha_right(spec: CalculusSpec, t: Tensor, k: int) -> TensorMap:
    """``alpha(x (x) y)(z) = x <y^dagger, z>`` with ``y`` of degree ``k``."""
    n = t.degree - k
    if n < 0 or k < 0:
        raise ValueError(f"cannot split a degree-{t.degree} tensor as {n} + {k}")
    split: Dict[Index, List[Tuple[Index, Element]]] = {}
    for idx, c in t.coeffs.items():
        left, right = idx[:n], idx[n:]
        split.setdefault(left, []).append((right, c))

    def apply(z: Tensor) -> Union[Tensor, Element]:
        if z.degree != k:
            raise ValueError(f"expected a degree-{k} tensor, got degree {z.degree}")
        out: Dict[Index, Element] = {}
        for left, rights in split.items():
            acc = spec.algebra.zero
            for right, c in rights:
                sgn = spec.sign(right)
                rev = right[::-1]
                for kk, b in z.coeffs.items():
                    h = spec.metric_product(rev, kk)
                    if h:
                        term = h * c * b
                        acc = acc + term if sgn > 0 else acc - term
            if acc:
                out[left] = acc
        if n == 0:
            return out.get((), spec.algebra.zero)
        return spec.tensor(n, out)

    return apply


def alpha_right_inverse(
    spec: CalculusSpec, T: TensorMap, n: int, k: int, gp: Optional[GeneratingPair] = None
) -> Tensor:
    """``sum_J T(x_J) (x) x'_J^dagger`` over the product pair of degree ``k``."""
    gp = gp or canonical_generating_pair(spec)
    out = spec.tensor(n + k)
    for x, y in product_pair(spec, gp, k):
        v = T(x)
        yd = dag(spec, y)
        if isinstance(v, Element):
            out = out + v * yd
        else:
            out = out + v.otimes(yd)
    return out


def check_right_linear(spec: CalculusSpec, T: TensorMap, k: int, samples: Sequence[Element]) -> Optional[str]:
    for b in spec.basis(k):
        tb = T(b)
        for a in samples:
            if T(b * a) != tb * a:
                return f"T(e*a) != T(e)*a for a = {a}"
    return None


def adjoint_hom(
    spec: CalculusSpec, T: TensorMap, k: int, gp: Optional[GeneratingPair] = None,
    samples: Optional[Sequence[Element]] = None,
) -> TensorMap:
    """Adjoint for the inner product: ``T* t = sum x_J <T x'_J, t>``."""
    from .sampling import probes

    bad = check_right_linear(spec, T, k, samples if samples is not None else probes(spec.algebra))
    if bad:
        raise ValueError(f"map is not right-linear: {bad}")
    gp = gp or canonical_generating_pair(spec)
    pp = [(x, T(y)) for x, y in product_pair(spec, gp, k)]

    def apply(t: Tensor) -> Tensor:
        out = spec.tensor(k)
        for x, ty in pp:
            out = out + x * inner(spec, ty, t)
        return out

    return apply

