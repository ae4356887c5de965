"""Vector fields as module duals of the one-forms, derivations and affine connections.

A right-linear field ``X`` is stored as ``X_k = <<X, e_k>>`` and a left-linear
field ``Y`` as ``Y_k = <<e_k, Y>>``; a bilinear field has central coefficients
and pairs the same way from both sides.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .algebra import Element
from .calculus import antisym, d0, d1
from .connection import LEFT, RIGHT, Connection, conjugate, curvature, pair_form_tensor
from .forms import CalculusSpec, Tensor, inner

RIGHT_LINEAR = "right_linear"
LEFT_LINEAR = "left_linear"
BILINEAR = "bilinear"

TWO = (mpq(2), mpq(0))


class ChiralityError(ValueError):
    pass


class NotInDC(ValueError):
    """The derivation fails a vanishing-combination probe."""


@dataclass(frozen=True)
class VectorField:
    spec: CalculusSpec
    coeffs: Tuple[Element, ...]
    chirality: str

    def __post_init__(self):
        if self.chirality not in (RIGHT_LINEAR, LEFT_LINEAR, BILINEAR):
            raise ValueError(f"unknown chirality {self.chirality!r}")
        if self.chirality == BILINEAR and not all(c.is_central() for c in self.coeffs):
            raise ChiralityError("a bilinear field needs central coefficients")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.spec, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), _meet(self, other))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.spec, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), _meet(self, other))

    def __neg__(self) -> "VectorField":
        return VectorField(self.spec, tuple(-a for a in self.coeffs), self.chirality)

    def __mul__(self, a: Element) -> "VectorField":
        """``X a`` for left-linear (or bilinear) ``X``: ``<<w, X a>> = <<w, X>> a``."""
        if self.chirality == RIGHT_LINEAR:
            raise ChiralityError("right multiplication acts on left-linear fields")
        return _field(self.spec, tuple(c * a for c in self.coeffs), LEFT_LINEAR)

    def __rmul__(self, a: Element) -> "VectorField":
        """``a X`` for right-linear (or bilinear) ``X``."""
        if self.chirality == LEFT_LINEAR:
            raise ChiralityError("left multiplication acts on right-linear fields")
        return _field(self.spec, tuple(a * c for c in self.coeffs), RIGHT_LINEAR)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_chirality(self, chirality: str) -> "VectorField":
        if self.chirality not in (chirality, BILINEAR):
            raise ChiralityError(f"{self.chirality} field used as {chirality}")
        return self

    def __repr__(self) -> str:
        return f"VectorField({self.chirality}, {[str(c) for c in self.coeffs]})"


def _meet(a: VectorField, b: VectorField) -> str:
    if a.chirality == b.chirality:
        return a.chirality
    if BILINEAR in (a.chirality, b.chirality):
        return a.chirality if b.chirality == BILINEAR else b.chirality
    raise ChiralityError(f"cannot combine {a.chirality} and {b.chirality} fields")


def _field(spec: CalculusSpec, coeffs, preferred: str) -> VectorField:
    if all(c.is_central() for c in coeffs) and preferred == BILINEAR:
        return VectorField(spec, tuple(coeffs), BILINEAR)
    return VectorField(spec, tuple(coeffs), preferred)


def bilinear_or(spec: CalculusSpec, coeffs, fallback: str) -> VectorField:
    """Bilinear when every coefficient is central, else ``fallback``."""
    coeffs = tuple(coeffs)
    if all(c.is_central() for c in coeffs):
        return VectorField(spec, coeffs, BILINEAR)
    return VectorField(spec, coeffs, fallback)


# ---------------------------------------------------------------------------
# pairings


def pair(X: VectorField, omega: Tensor) -> Element:
    """``<<X, omega>>`` for right-linear (or bilinear) ``X``."""
    X.as_chirality(RIGHT_LINEAR)
    out = X.spec.algebra.zero
    for (k,), a in omega.coeffs.items():
        out = out + X.coeffs[k] * a
    return out


def pair_left(omega: Tensor, Y: VectorField) -> Element:
    """``<<omega, Y>>`` for left-linear (or bilinear) ``Y``."""
    Y.as_chirality(LEFT_LINEAR)
    out = Y.spec.algebra.zero
    for (k,), a in omega.coeffs.items():
        out = out + a * Y.coeffs[k]
    return out


def dagger(X: VectorField) -> VectorField:
    """``<<w, X^dagger>> = <<X, w^dagger>>^*``: coefficients ``eps_k X_k^*``."""
    spec = X.spec
    coeffs = tuple(c.star() if s > 0 else -c.star() for c, s in zip(X.coeffs, spec.dagger_signs))
    flipped = {RIGHT_LINEAR: LEFT_LINEAR, LEFT_LINEAR: RIGHT_LINEAR, BILINEAR: BILINEAR}[X.chirality]
    return VectorField(spec, coeffs, flipped)


def vf_product(X: VectorField, alpha: Tensor, Y: VectorField) -> Element:
    """``<<X, e_i (x) e_j c, Y>> = X_i c Y_j``."""
    X.as_chirality(RIGHT_LINEAR)
    Y.as_chirality(LEFT_LINEAR)
    if alpha.degree != 2:
        raise ValueError("vf_product pairs two-tensors")
    out = X.spec.algebra.zero
    for (i, j), c in alpha.coeffs.items():
        out = out + X.coeffs[i] * c * Y.coeffs[j]
    return out


def vf_product3_right(X: VectorField, alpha: Tensor, Z2: VectorField, Z1: VectorField) -> Element:
    """``<<X, alpha, Z2 . Z1>>`` for bilinear ``Z1, Z2``."""
    X.as_chirality(RIGHT_LINEAR)
    out = X.spec.algebra.zero
    for (i, j, k), c in alpha.coeffs.items():
        out = out + X.coeffs[i] * c * Z2.coeffs[j] * Z1.coeffs[k]
    return out


def vf_product3_left(Z1: VectorField, Z2: VectorField, alpha: Tensor, Y: VectorField) -> Element:
    """``<<Z1 . Z2, alpha, Y>>`` for bilinear ``Z1, Z2``."""
    Y.as_chirality(LEFT_LINEAR)
    out = Y.spec.algebra.zero
    for (i, j, k), c in alpha.coeffs.items():
        out = out + Z1.coeffs[i] * Z2.coeffs[j] * c * Y.coeffs[k]
    return out


# ---------------------------------------------------------------------------
# musical maps


def sharp(spec: CalculusSpec, omega: Tensor, side: str = RIGHT) -> VectorField:
    """Right: ``eta -> <omega^dagger, eta>``.  Left: ``eta -> <eta^dagger, omega>``."""
    eps = spec.dagger_signs
    H = spec.metric
    coeffs = []
    for k in range(spec.rank):
        acc = spec.algebra.zero
        for (j,), a in omega.coeffs.items():
            if side == RIGHT:
                # X_k = sum_j eps_j a_j H_jk
                t = a * H[j][k]
                acc = acc + t if eps[j] > 0 else acc - t
            else:
                # Y_k = eps_k sum_j H_kj a_j
                acc = acc + H[k][j] * a
        coeffs.append(acc if side == RIGHT or eps[k] > 0 else -acc)
    return bilinear_or(spec, coeffs, RIGHT_LINEAR if side == RIGHT else LEFT_LINEAR)


def flat(X: VectorField, side: str = RIGHT) -> Tensor:
    spec = X.spec
    K = spec.metric_inverse
    eps = spec.dagger_signs
    r = spec.rank
    coeffs = {}
    for j in range(r):
        acc = spec.algebra.zero
        if side == RIGHT:
            X.as_chirality(RIGHT_LINEAR)
            for k in range(r):
                acc = acc + X.coeffs[k] * K[k][j]
            acc = acc if eps[j] > 0 else -acc
        else:
            X.as_chirality(LEFT_LINEAR)
            for k in range(r):
                t = K[j][k] * X.coeffs[k]
                acc = acc + t if eps[k] > 0 else acc - t
        coeffs[(j,)] = acc
    return spec.tensor(1, coeffs)


def vf_inner(X: VectorField, Y: VectorField) -> Element:
    """``<X, Y> = <X^flat, Y^flat>`` through the left flat."""
    return inner(X.spec, flat(X, LEFT), flat(Y, LEFT))


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Derivation:
    """``a -> sum_j c_j d_j(a) + [z, a]`` with central ``c_j``.

    The inner part ``z`` exists to exhibit derivations outside the span that
    the one-forms see; :func:`phi` rejects them.
    """

    spec: CalculusSpec
    coeffs: Tuple[Element, ...]
    inner_part: Optional[Element] = None

    def __post_init__(self):
        if not all(c.is_central() for c in self.coeffs):
            raise ValueError("derivation coefficients must be central")

    def __call__(self, a: Element) -> Element:
        a = self.spec.algebra.coerce(a)
        out = self.spec.algebra.zero
        for j, c in enumerate(self.coeffs):
            if c:
                out = out + c * a.partial(j + 1)
        if self.inner_part is not None:
            out = out + self.inner_part.commutator(a)
        return out

    def is_hermitian(self, samples: Sequence[Element]) -> bool:
        return all(self(a.star()).star() == self(a) for a in samples)

    def leibniz_defect(self, a: Element, b: Element) -> Element:
        return self(a * b) - self(a) * b - a * self(b)


def basic_derivation(spec: CalculusSpec, j: int) -> Derivation:
    alg = spec.algebra
    return Derivation(spec, tuple(alg.one if k == j - 1 else alg.zero for k in range(spec.rank)))


def commutator(d1_: Derivation, d2_: Derivation) -> Derivation:
    """``[a.d, b.d] = sum_k (a.d b_k - b.d a_k) d_k`` for central-coefficient derivations."""
    if d1_.inner_part is not None or d2_.inner_part is not None:
        raise ValueError("commutators of inner parts are not supported")
    coeffs = []
    for k in range(d1_.spec.rank):
        coeffs.append(d1_(d2_.coeffs[k]) - d2_(d1_.coeffs[k]))
    return Derivation(d1_.spec, tuple(coeffs))


def vanishing_combinations(spec: CalculusSpec) -> List[List[Tuple[Element, Element]]]:
    """Finite family of ``sum a_i d b_i = 0``, each verified before use.

    Built from ``x^-1 dx = i (m e1 + n e2)`` for monomials ``x = U^m V^n`` and,
    when the algebra is commutative, the Leibniz syzygy
    ``d(ab) - a db - b da = 0``.
    """
    alg = spec.algebra
    mono = [alg.monomial(m, n) for m, n in ((1, 0), (0, 1), (1, 1), (-1, 1), (2, 0), (0, -2), (2, -1))]
    combos: List[List[Tuple[Element, Element]]] = []
    for x in mono:
        combos.append([(x.inverse(), x), (x, x.inverse())])
    for x, y in product(mono[:4], repeat=2):
        xy = x * y
        combos.append([(x.inverse(), x), (y.inverse(), y), (-xy.inverse(), xy)])
    for x in mono[:3]:
        x2 = x * x
        combos.append([(x.inverse().scale((mpq(2), mpq(0))), x), (-x2.inverse(), x2)])
    if not alg.formal:
        elems = [alg.parse(s) for s in ("1 + U", "V - 2*U^-1", "U*V + 1/2i")]
        for a, b in product(elems, repeat=2):
            combos.append([(alg.one, a * b), (-a, b), (-b, a)])
    for combo in combos:
        form = sum((a * d0(spec, b) for a, b in combo), spec.tensor(1))
        if form:
            raise AssertionError(f"vanishing combination does not vanish: {combo}")
    return combos


def dc_witness(D: Derivation) -> Optional[str]:
    for combo in vanishing_combinations(D.spec):
        v = sum((a * D(b) for a, b in combo), D.spec.algebra.zero)
        if v:
            return " + ".join(f"({a}) d({b})" for a, b in combo) + f" = 0 but the derivation gives {v}"
    return None


def phi(D: Derivation) -> VectorField:
    """``<<phi(D), sum a_i d b_i>> = sum a_i D(b_i)``."""
    bad = dc_witness(D)
    if bad:
        raise NotInDC(bad)
    return VectorField(D.spec, tuple(D.coeffs), BILINEAR)


def phi_inverse(X: VectorField) -> Derivation:
    """``a -> <<X, da>>``."""
    if X.chirality != BILINEAR:
        raise ChiralityError("phi is onto the bilinear fields")
    return Derivation(X.spec, tuple(X.coeffs))


# ---------------------------------------------------------------------------
# affine connections on vector fields


def affine_connection(c: Connection, D: Derivation, X: VectorField, side: Optional[str] = None) -> VectorField:
    """Covariant derivative of ``X`` along ``D``.

    Left-linear ``X`` (side ``"left"``) uses the left connection:
    ``<<w, nabla X>> = D<<w, X>> - <<phi(D), nabla_left w, X>>``.
    Right-linear ``X`` (side ``"right"``) uses the right connection:
    ``<<nabla X, w>> = D<<X, w>> - <<X, nabla_right w, phi(D)>>``.
    Bilinear ``X`` defaults to the left variant.
    """
    spec = c.spec
    if side is None:
        side = RIGHT if X.chirality == RIGHT_LINEAR else LEFT
    pD = phi(D)
    if side == LEFT:
        X.as_chirality(LEFT_LINEAR)
        cl = c if c.orientation == LEFT else conjugate(c)
        coeffs = [D(X.coeffs[k]) - vf_product(pD, cl.gammas[k], X) for k in range(spec.rank)]
        return VectorField(spec, tuple(coeffs), LEFT_LINEAR)
    X.as_chirality(RIGHT_LINEAR)
    cr = c if c.orientation == RIGHT else conjugate(c)
    coeffs = [D(X.coeffs[k]) - vf_product(X, cr.gammas[k], pD) for k in range(spec.rank)]
    return VectorField(spec, tuple(coeffs), RIGHT_LINEAR)


def derivation_torsion(c: Connection, D1: Derivation, D2: Derivation, side: str = LEFT) -> VectorField:
    """``nabla_D1 phi(D2) - nabla_D2 phi(D1) - phi([D1, D2])``."""
    a = affine_connection(c, D1, phi(D2), side)
    b = affine_connection(c, D2, phi(D1), side)
    lie = phi(commutator(D1, D2))
    return VectorField(c.spec, tuple(x - y - z for x, y, z in zip(a.coeffs, b.coeffs, lie.coeffs)), a.chirality)


def metric_compatibility_defect(c: Connection, D: Derivation, X: VectorField, Y: VectorField) -> Element:
    """``D<X, Y> - <nabla X, Y> - <X, nabla Y>`` for left-linear ``X, Y``."""
    nx = affine_connection(c, D, X, LEFT)
    ny = affine_connection(c, D, Y, LEFT)
    return D(vf_inner(X, Y)) - vf_inner(nx, Y) - vf_inner(X, ny)


def metric_compatibility_check(c: Connection, D: Derivation, X: VectorField, Y: VectorField) -> bool:
    return not metric_compatibility_defect(c, D, X, Y)


def derivation_curvature(c: Connection, D1: Derivation, D2: Derivation, X: VectorField, side: Optional[str] = None) -> VectorField:
    """``R(D1, D2) X = nabla_1 nabla_2 X - nabla_2 nabla_1 X - nabla_[D1,D2] X``."""
    nab = lambda D, Z: affine_connection(c, D, Z, side)  # noqa: E731
    a = nab(D1, nab(D2, X))
    b = nab(D2, nab(D1, X))
    e = nab(commutator(D1, D2), X)
    return VectorField(c.spec, tuple(x - y - z for x, y, z in zip(a.coeffs, b.coeffs, e.coeffs)), a.chirality)


# ---------------------------------------------------------------------------
# cross identities


def torsion_coincide_residual(c: Connection, D1: Derivation, D2: Derivation, omega: Tensor, side: str = LEFT) -> Element:
    """Pairing of the vector-field torsion with ``omega`` minus its form-side value.

    Left: ``<<w, tau>> - 2<<phi2, ((1-Psi) nabla_left - d) w, phi1>>``.
    Right: ``<<tau, w>> - 2<<phi1, ((1-Psi) nabla_right + d) w, phi2>>``.
    """
    spec = c.spec
    tau = derivation_torsion(c, D1, D2, side)
    p1, p2 = phi(D1), phi(D2)
    if side == LEFT:
        cl = c if c.orientation == LEFT else conjugate(c)
        T = antisym(cl(omega)) - d1(spec, omega)
        return pair_left(omega, tau) - vf_product(p2, T, p1).scale(TWO)
    cr = c if c.orientation == RIGHT else conjugate(c)
    T = antisym(cr(omega)) + d1(spec, omega)
    return pair(tau, omega) - vf_product(p1, T, p2).scale(TWO)


def curvature_residual(c: Connection, D1: Derivation, D2: Derivation, X: VectorField, omega: Tensor) -> Element:
    """``<<R(D1, D2) X, w>> - 2<<X, R(w), phi(D2) . phi(D1)>>`` for right-linear ``X``."""
    cr = c if c.orientation == RIGHT else conjugate(c)
    R = derivation_curvature(cr, D1, D2, X, RIGHT)
    return pair(R, omega) - vf_product3_right(X, curvature(cr)(omega), phi(D2), phi(D1)).scale(TWO)


def antisym_residual(X: VectorField, alpha: Tensor, Y: VectorField) -> Element:
    """``<<X, a, Y>> - <<Y, a, X>> - 2<<X, (1-Psi) a, Y>>`` for bilinear ``X, Y``."""
    return vf_product(X, alpha, Y) - vf_product(Y, alpha, X) - vf_product(X, antisym(alpha), Y).scale(TWO)


def pair_prods_residual(omega: Tensor, alpha: Tensor, Y: VectorField) -> Element:
    """``<<<w, a>, Y>> - <<(w^sharp)^dagger, a, Y>>`` with the left sharp."""
    spec = Y.spec
    return pair_left(pair_form_tensor(spec, omega, alpha), Y) - vf_product(dagger(sharp(spec, omega, LEFT)), alpha, Y)


def random_hermitian_derivation(spec: CalculusSpec, rng: random.Random) -> Derivation:
    from .sampling import random_element

    alg = spec.algebra
    coeffs = []
    for _ in range(spec.rank):
        a = random_element(alg, rng, terms=2, degree=1, central=True)
        coeffs.append(a + a.star())
    return Derivation(spec, tuple(coeffs))


def random_field(spec: CalculusSpec, rng: random.Random, chirality: str) -> VectorField:
    from .sampling import random_element

    central = chirality == BILINEAR
    return VectorField(
        spec,
        tuple(random_element(spec.algebra, rng, terms=2, degree=1, central=central) for _ in range(spec.rank)),
        chirality,
    )


def cross_identity_residuals(c: Connection, seed: int = 0, instances: int = 20) -> Dict[str, List[Element]]:
    """All duality cross-identities on ``instances`` seeded random probes.

    Every returned residual is exactly zero when the engine is consistent;
    the metric transfer additionally needs ``c`` Hermitian.
    """
    from .sampling import random_form, random_tensor

    spec = c.spec
    rng = random.Random(seed)
    out: Dict[str, List[Element]] = {
        "torsion_coincide_left": [],
        "torsion_coincide_right": [],
        "curvature_correspondence": [],
        "antisym": [],
        "metric_transfer": [],
        "pair_prods": [],
    }
    for _ in range(instances):
        D1 = random_hermitian_derivation(spec, rng)
        D2 = random_hermitian_derivation(spec, rng)
        w = random_form(spec, rng)
        out["torsion_coincide_left"].append(torsion_coincide_residual(c, D1, D2, w, LEFT))
        out["torsion_coincide_right"].append(torsion_coincide_residual(c, D1, D2, w, RIGHT))
        X = random_field(spec, rng, RIGHT_LINEAR)
        out["curvature_correspondence"].append(curvature_residual(c, D1, D2, X, w))
        A = random_field(spec, rng, BILINEAR)
        B = random_field(spec, rng, BILINEAR)
        alpha = random_tensor(spec, rng, 2)
        out["antisym"].append(antisym_residual(A, alpha, B))
        Xl = random_field(spec, rng, LEFT_LINEAR)
        Yl = random_field(spec, rng, LEFT_LINEAR)
        out["metric_transfer"].append(metric_compatibility_defect(c, D1, Xl, Yl))
        out["pair_prods"].append(pair_prods_residual(w, alpha, Yl))
    return out
