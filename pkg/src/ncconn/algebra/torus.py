"""The quantum torus ``C<U, U^-1, V, V^-1>`` with ``VU = qUV``.

Elements are finite sums ``c q^t U^m V^n`` stored as ``{(m, n, t): (re, im)}``.
``q`` is either a formal unit (``q_mode="formal"``) or the number 1
(``q_mode="one"``, the commutative torus, where ``t`` is always 0).

An algebra may be localised at a central self-adjoint element ``D``; its
elements are then ``N D^-k`` with ``k`` minimal.  This is what makes a
conformal factor such as ``2 + U + U^-1`` invertible.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from gmpy2 import mpq

from .gauss import (
    G,
    G0,
    G1,
    gadd,
    gconj,
    gdiv,
    gformat,
    gmul,
    gneg,
    gsub,
    gzero,
)

Key = Tuple[int, int, int]
Terms = Dict[Key, G]

FORMAL = "formal"
ONE = "one"

# bound on D-powers tried when searching for an inverse
_MAX_INVERSE_POWER = 8


class NotInvertible(ArithmeticError):
    pass


class AlgebraMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# term-dict kernels


def _clean(terms: Terms) -> Terms:
    return {k: v for k, v in terms.items() if v[0] or v[1]}


def _add_into(acc: Terms, terms: Mapping[Key, G], sign: int = 1) -> None:
    for k, v in terms.items():
        if sign < 0:
            v = gneg(v)
        if k in acc:
            s = gadd(acc[k], v)
            if s[0] or s[1]:
                acc[k] = s
            else:
                del acc[k]
        else:
            acc[k] = v


def _mul_terms(a: Mapping[Key, G], b: Mapping[Key, G], formal: bool) -> Terms:
    out: Terms = {}
    bi = list(b.items())
    for (m1, n1, t1), (r1, i1) in a.items():
        for (m2, n2, t2), (r2, i2) in bi:
            key = (m1 + m2, n1 + n2, t1 + t2 + n1 * m2 if formal else 0)
            re = r1 * r2 - i1 * i2
            im = r1 * i2 + i1 * r2
            cur = out.get(key)
            if cur is None:
                out[key] = (re, im)
            else:
                out[key] = (cur[0] + re, cur[1] + im)
    return _clean(out)


def _scale_terms(terms: Mapping[Key, G], c: G) -> Terms:
    if gzero(c):
        return {}
    return {k: gmul(v, c) for k, v in terms.items()}


def _star_terms(terms: Mapping[Key, G], formal: bool) -> Terms:
    if formal:
        return {(-m, -n, m * n - t): gconj(v) for (m, n, t), v in terms.items()}
    return {(-m, -n, 0): gconj(v) for (m, n, _), v in terms.items()}


def _shift(terms: Mapping[Key, G], s: Key) -> Terms:
    return {(k[0] + s[0], k[1] + s[1], k[2] + s[2]): v for k, v in terms.items()}


def _divide_exact(num: Mapping[Key, G], den: Mapping[Key, G]) -> Optional[Terms]:
    """Quotient ``num / den`` if it is a Laurent polynomial, else ``None``.

    Treats keys as commuting exponents, which is valid whenever ``den`` is
    central (the only way it is called).  ``{den}`` is a Groebner basis of the
    principal ideal it generates, so a nonzero remainder proves non-divisibility.
    """
    if not num:
        return {}
    lo_d = tuple(min(k[i] for k in den) for i in range(3))
    lo_n = tuple(min(k[i] for k in num) for i in range(3))
    d0 = _shift(den, (-lo_d[0], -lo_d[1], -lo_d[2]))
    p = _shift(num, (-lo_n[0], -lo_n[1], -lo_n[2]))
    lead = max(d0)
    lead_c = d0[lead]
    hi_d = tuple(max(k[i] for k in d0) for i in range(3))
    hi_n = tuple(max(k[i] for k in p) for i in range(3))
    if any(hi_n[i] < hi_d[i] for i in range(3)):
        return None
    quot: Terms = {}
    d_items = list(d0.items())
    while p:
        lt = max(p)
        s = (lt[0] - lead[0], lt[1] - lead[1], lt[2] - lead[2])
        if s[0] < 0 or s[1] < 0 or s[2] < 0:
            return None
        c = gdiv(p[lt], lead_c)
        quot[s] = c
        for k, v in d_items:
            kk = (k[0] + s[0], k[1] + s[1], k[2] + s[2])
            nv = gsub(p.get(kk, G0), gmul(c, v))
            if nv[0] or nv[1]:
                p[kk] = nv
            else:
                p.pop(kk, None)
    return _shift(quot, (lo_n[0] - lo_d[0], lo_n[1] - lo_d[1], lo_n[2] - lo_d[2]))


# ---------------------------------------------------------------------------


class Scalar:
    """A central coefficient: a Laurent polynomial in ``q`` over Q(i)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Mapping[int, G]] = None):
        self.coeffs: Dict[int, G] = {t: v for t, v in (coeffs or {}).items() if not gzero(v)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Scalar) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Scalar(0)"
        parts = []
        for t in sorted(self.coeffs):
            c = gformat(self.coeffs[t])
            parts.append(c if t == 0 else f"{c}*q^{t}")
        return "Scalar(" + " + ".join(parts) + ")"


class QuantumTorus:
    """Factory and context for elements.

    ``localize`` (optional) is a central, self-adjoint element of the
    unlocalised algebra that is made invertible.
    """

    def __init__(self, q_mode: str = FORMAL, localize: Optional["Element"] = None):
        if q_mode not in (FORMAL, ONE):
            raise ValueError(f"q_mode must be 'formal' or 'one', got {q_mode!r}")
        self.q_mode = q_mode
        self.formal = q_mode == FORMAL
        self._den: Optional[Terms] = None
        self._den_pows: list = []
        if localize is not None:
            if localize.den or localize.is_zero():
                raise ValueError("localising element must be a nonzero Laurent polynomial")
            if self.formal and any(k[0] or k[1] for k in localize.terms):
                raise ValueError("at formal q only scalar (q-polynomial) elements can be localised")
            if _star_terms(localize.terms, self.formal) != localize.terms:
                raise ValueError("localising element must be self-adjoint")
            if len(localize.terms) > 1:
                self._den = dict(localize.terms)
                self._den_pows = [{(0, 0, 0): G1}, self._den]

    # -- identity ----------------------------------------------------------
    @property
    def denominator(self) -> Optional["Element"]:
        if self._den is None:
            return None
        return Element(self.base(), self._den)

    def base(self) -> "QuantumTorus":
        return QuantumTorus(self.q_mode) if self._den is not None else self

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuantumTorus)
            and self.q_mode == other.q_mode
            and self._den == other._den
        )

    def __hash__(self) -> int:
        return hash((self.q_mode, frozenset((self._den or {}).items())))

    def __repr__(self) -> str:
        loc = "" if self._den is None else f", localize={self.denominator}"
        return f"QuantumTorus({self.q_mode!r}{loc})"

    # -- constructors ------------------------------------------------------
    def element(self, terms: Mapping[Key, G], den: int = 0) -> "Element":
        return Element(self, terms, den)

    def scalar(self, re=0, im=0) -> "Element":
        return Element(self, {(0, 0, 0): (mpq(re), mpq(im))})

    def monomial(self, m: int = 0, n: int = 0, t: int = 0, coeff: G = G1) -> "Element":
        if not self.formal:
            t = 0
        return Element(self, {(m, n, t): coeff})

    @property
    def zero(self) -> "Element":
        return Element(self, {})

    @property
    def one(self) -> "Element":
        return self.monomial()

    @property
    def U(self) -> "Element":
        return self.monomial(1, 0)

    @property
    def V(self) -> "Element":
        return self.monomial(0, 1)

    @property
    def q(self) -> "Element":
        return self.monomial(0, 0, 1)

    @property
    def i(self) -> "Element":
        return self.monomial(coeff=(mpq(0), mpq(1)))

    def from_scalar(self, s: Scalar) -> "Element":
        return Element(self, {(0, 0, t if self.formal else 0): v for t, v in s.coeffs.items()})

    def parse(self, text: str) -> "Element":
        from .parser import parse

        return parse(self, text)

    def coerce(self, x: Union["Element", int, mpq]) -> "Element":
        if isinstance(x, Element):
            if x.alg is self:
                return x
            if x.alg == self:
                return Element(self, x.terms, x.den, _normal=True)
            if x.den == 0 and x.alg.q_mode == self.q_mode:
                return Element(self, x.terms)
            raise AlgebraMismatch(f"cannot combine elements of {x.alg!r} and {self!r}")
        return self.scalar(x)

    # -- localisation helpers ----------------------------------------------
    def _den_pow(self, k: int) -> Terms:
        while len(self._den_pows) <= k:
            self._den_pows.append(_mul_terms(self._den_pows[-1], self._den, self.formal))
        return self._den_pows[k]

    def _normalize(self, terms: Terms, den: int) -> Tuple[Terms, int]:
        if den == 0 or not terms:
            return terms, 0
        while den > 0:
            q = _divide_exact(terms, self._den)
            if q is None:
                break
            terms, den = q, den - 1
        return terms, den

    def _lift(self, x: "Element", den: int) -> Terms:
        """Numerator of ``x`` rewritten over ``D^den`` (``den >= x.den``)."""
        if den == x.den:
            return x.terms
        return _mul_terms(x.terms, self._den_pow(den - x.den), self.formal)


class Element:
    """Immutable element ``terms * D^-den`` of a :class:`QuantumTorus`."""

    __slots__ = ("alg", "terms", "den", "_hash")

    def __init__(self, alg: QuantumTorus, terms: Mapping[Key, G], den: int = 0, _normal: bool = False):
        self.alg = alg
        t = terms if _normal else _clean(dict(terms))
        if den and not _normal:
            if alg._den is None:
                raise ValueError("denominators require a localised algebra")
            t, den = alg._normalize(t, den)
        self.terms: Terms = t
        self.den = den if t else 0
        self._hash = None

    # -- basic protocol ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, mpq)):
            other = self.alg.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.den == other.den and self.terms == other.terms and self.alg == other.alg

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.terms.items()), self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"Element({self})"

    def __str__(self) -> str:
        from .parser import format_element

        return format_element(self)

    def __iter__(self) -> Iterator[Tuple[Key, G]]:
        return iter(sorted(self.terms.items()))

    # -- ring operations ---------------------------------------------------
    def _binary(self, other) -> "Element":
        return self.alg.coerce(other)

    def __add__(self, other) -> "Element":
        other = self._binary(other)
        if self.den == other.den:
            acc = dict(self.terms)
            _add_into(acc, other.terms)
            return Element(self.alg, acc, self.den, _normal=self.den == 0)
        den = max(self.den, other.den)
        acc = dict(self.alg._lift(self, den))
        _add_into(acc, self.alg._lift(other, den))
        return Element(self.alg, acc, den)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(self.alg, {k: gneg(v) for k, v in self.terms.items()}, self.den, _normal=True)

    def __sub__(self, other) -> "Element":
        return self + (-self._binary(other))

    def __rsub__(self, other) -> "Element":
        return self._binary(other) + (-self)

    def __mul__(self, other) -> "Element":
        if not isinstance(other, (Element, int, mpq)):
            return NotImplemented
        if isinstance(other, (int, mpq)):
            return self.scale((mpq(other), mpq(0)))
        other = self._binary(other)
        terms = _mul_terms(self.terms, other.terms, self.alg.formal)
        den = self.den + other.den
        return Element(self.alg, terms, den, _normal=den == 0)

    def __rmul__(self, other) -> "Element":
        if isinstance(other, (int, mpq)):
            return self.scale((mpq(other), mpq(0)))
        return self._binary(other) * self

    def scale(self, c: G) -> "Element":
        """Multiply by a Gaussian-rational constant."""
        return Element(self.alg, _scale_terms(self.terms, c), self.den, _normal=True)

    def __pow__(self, k: int) -> "Element":
        if k < 0:
            return self.inverse() ** (-k)
        out = self.alg.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other) -> "Element":
        return self * self._binary(other).inverse()

    def star(self) -> "Element":
        return Element(self.alg, _star_terms(self.terms, self.alg.formal), self.den, _normal=True)

    def commutator(self, other) -> "Element":
        other = self._binary(other)
        return self * other - other * self

    # -- structure ---------------------------------------------------------
    def is_central(self) -> bool:
        if not self.alg.formal:
            return True
        return all(m == 0 and n == 0 for m, n, _ in self.terms)

    def is_scalar(self) -> bool:
        """True for Gaussian-rational constants."""
        return self.den == 0 and all(k == (0, 0, 0) for k in self.terms)

    def is_self_adjoint(self) -> bool:
        return self.star() == self

    def scalar_value(self) -> G:
        if not self.terms:
            return G0
        if not self.is_scalar():
            raise ValueError(f"{self} is not a constant")
        return self.terms[(0, 0, 0)]

    def coefficient(self, m: int, n: int) -> Scalar:
        """Central coefficient of ``U^m V^n`` (only for elements without denominator)."""
        if self.den:
            raise ValueError("coefficient() is undefined on localised fractions")
        return Scalar({k[2]: v for k, v in self.terms.items() if k[0] == m and k[1] == n})

    def support(self) -> Iterable[Tuple[int, int]]:
        return sorted({(k[0], k[1]) for k in self.terms})

    @property
    def numerator(self) -> "Element":
        return Element(self.alg.base(), self.terms, _normal=True)

    # -- inverse -----------------------------------------------------------
    def inverse(self) -> "Element":
        alg = self.alg
        if not self.terms:
            raise NotInvertible("0 is not invertible")
        if len(self.terms) == 1:
            (m, n, t), c = next(iter(self.terms.items()))
            from .gauss import ginv

            key = (-m, -n, (m * n - t) if alg.formal else 0)
            mono = Element(alg, {key: ginv(c)}, _normal=True)
            if self.den:
                return mono * Element(alg, alg._den_pow(self.den), 0, _normal=True)
            return mono
        if alg._den is None or not self.is_central():
            # at formal q the division below is only sound for central elements
            raise NotInvertible(f"{self} is not invertible")
        for j in range(1, _MAX_INVERSE_POWER + 1):
            quot = _divide_exact(alg._den_pow(j), self.terms)
            if quot is not None:
                top = quot if not self.den else _mul_terms(quot, alg._den_pow(self.den), alg.formal)
                return Element(alg, top, j)
        raise NotInvertible(f"{self} is not invertible after localising at {alg.denominator}")

    # -- derivations -------------------------------------------------------
    def partial(self, j: int) -> "Element":
        """The basic derivation ``d_j``: ``d_1 U^m V^n = i m U^m V^n``, ``d_2`` uses ``n``."""
        if j not in (1, 2):
            raise ValueError("only d_1 and d_2 exist on the torus")
        idx = j - 1
        dn = _partial_terms(self.terms, idx)
        if not self.den:
            return Element(self.alg, dn, _normal=True)
        alg = self.alg
        dd = _partial_terms(alg._den, idx)
        # d(N D^-k) = dN D^-k - k N dD D^-(k+1)
        first = Element(alg, dn, self.den)
        second = Element(alg, _mul_terms(self.terms, dd, alg.formal), self.den + 1)
        return first - second * self.den


def _partial_terms(terms: Mapping[Key, G], idx: int) -> Terms:
    out: Terms = {}
    for k, (re, im) in terms.items():
        w = k[idx]
        if w:
            out[k] = (-im * w, re * w)
    return out
