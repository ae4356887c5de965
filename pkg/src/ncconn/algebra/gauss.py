"""Exact Gaussian rationals as ``(re, im)`` pairs of ``gmpy2.mpq``.

Plain tuples keep the inner loops of polynomial multiplication cheap; the
helpers below are the only arithmetic the rest of the package relies on.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Tuple, Union

from gmpy2 import mpq

G = Tuple[mpq, mpq]
Rational = Union[int, Fraction, mpq]

ZERO = mpq(0)
ONE = mpq(1)
G0: G = (ZERO, ZERO)
G1: G = (ONE, ZERO)
GI: G = (ZERO, ONE)


def g(re: Rational = 0, im: Rational = 0) -> G:
    return (mpq(re), mpq(im))


def gadd(a: G, b: G) -> G:
    return (a[0] + b[0], a[1] + b[1])


def gsub(a: G, b: G) -> G:
    return (a[0] - b[0], a[1] - b[1])


def gneg(a: G) -> G:
    return (-a[0], -a[1])


def gmul(a: G, b: G) -> G:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def gconj(a: G) -> G:
    return (a[0], -a[1])


def ginv(a: G) -> G:
    n = a[0] * a[0] + a[1] * a[1]
    if not n:
        raise ZeroDivisionError("division by zero Gaussian rational")
    return (a[0] / n, -a[1] / n)


def gdiv(a: G, b: G) -> G:
    return gmul(a, ginv(b))


def gzero(a: G) -> bool:
    return not a[0] and not a[1]


def ipow(k: int) -> G:
    """i**k for any integer k."""
    return ((G1, GI, (-ONE, ZERO), (ZERO, -ONE)))[k % 4]


def _fmt_rat(x: mpq) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def gformat(a: G) -> str:
    """Render as ``3/2``, ``-i``, ``1/2i`` or ``(1 - 2i)``."""
    re, im = a
    if not im:
        return _fmt_rat(re)
    if im == 1:
        ims = "i"
    elif im == -1:
        ims = "-i"
    else:
        ims = _fmt_rat(im) + "i"
    if not re:
        return ims
    sign = "-" if im < 0 else "+"
    mag = ims[1:] if im < 0 else ims
    return f"({_fmt_rat(re)} {sign} {mag})"
