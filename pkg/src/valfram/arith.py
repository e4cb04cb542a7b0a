"""Exact rationals, the extended value group and the base p-adic valuation.

Finite values are plain :class:`fractions.Fraction` (or ``int``) objects.
The two infinities are singleton sentinels that order correctly against
any rational:

>>> from fractions import Fraction
>>> Fraction(1, 2) < INF
True
>>> NEG_INF < -10**6
True
>>> Fraction(1, 2) + INF
inf

``INF`` absorbs addition; ``NEG_INF`` only exists to be compared (it is the
weight reported for the root of the valuative tree) and any arithmetic with
it raises :class:`InvalidOperand`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = [
    "INF",
    "NEG_INF",
    "InvalidOperand",
    "PBase",
    "Rat",
    "Val",
    "as_rat",
    "format_val",
    "is_prime",
    "parse_val",
    "val_add",
    "val_compare",
    "val_min",
    "val_scale",
    "vp",
    "vp_int",
]

Rat = Fraction


class InvalidOperand(ValueError):
    """Raised for arithmetic outside the domain of an operation."""


class _Infinity:
    __slots__ = ("_sign",)

    def __init__(self, sign: int) -> None:
        self._sign = sign

    # ordering -------------------------------------------------------------
    def _cmp(self, other: object) -> int:
        if other is self:
            return 0
        if isinstance(other, _Infinity):
            return 1 if self._sign > other._sign else -1
        if isinstance(other, Rational):
            return self._sign
        return NotImplemented  # type: ignore[return-value]

    def __lt__(self, other: object) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other: object) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other: object) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other: object) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash(("valfram-inf", self._sign))

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: object) -> "_Infinity":
        if self._sign < 0 or other is NEG_INF:
            raise InvalidOperand("arithmetic on -inf")
        if other is INF or isinstance(other, Rational):
            return INF
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: object) -> "_Infinity":
        if other is INF:
            raise InvalidOperand("inf - inf is undefined")
        return self.__add__(other)

    def __rsub__(self, other: object):
        raise InvalidOperand("cannot subtract an infinite value")

    def __mul__(self, other: object):
        if self._sign < 0:
            raise InvalidOperand("arithmetic on -inf")
        if isinstance(other, Rational):
            if other > 0:
                return INF
            if other == 0:
                # s * gamma with s = 0 is the constant term of an expansion
                return 0
            raise InvalidOperand("negative multiple of inf")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: object):
        if isinstance(other, Rational) and other > 0:
            return self.__mul__(1)
        raise InvalidOperand("inf may only be divided by a positive rational")

    def __neg__(self) -> "_Infinity":
        return NEG_INF if self._sign > 0 else INF

    def __repr__(self) -> str:
        return "inf" if self._sign > 0 else "-inf"

    def __reduce__(self):
        return (_infinity, (self._sign,))


def _infinity(sign: int) -> _Infinity:
    return INF if sign > 0 else NEG_INF


INF = _Infinity(1)
NEG_INF = _Infinity(-1)

Val = Union[Fraction, int, _Infinity]


def as_rat(q: object) -> Fraction:
    """Coerce ints, Fractions and "a/b" strings to a Fraction."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q.strip())
    raise InvalidOperand(f"not a rational: {q!r}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PBase:
    """The base valued field (Q, v_p)."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InvalidOperand(f"{self.p!r} is not a prime")

    def __int__(self) -> int:
        return self.p


def _prime_of(base: Union[PBase, int]) -> int:
    if isinstance(base, PBase):
        return base.p
    if not is_prime(base):
        raise InvalidOperand(f"{base!r} is not a prime")
    return base


def vp_int(n: int, p: int):
    """p-adic valuation of an integer (``INF`` for zero)."""
    if n == 0:
        return INF
    if p == 2:
        return ((n & -n).bit_length()) - 1
    v = 0
    q, r = divmod(n, p)
    while r == 0:
        v += 1
        n = q
        q, r = divmod(n, p)
    return v


def vp(q: object, base: Union[PBase, int]) -> Val:
    """p-adic valuation of a rational number.

    >>> vp(12, 2), vp(0, 5), vp(Fraction(3, 8), 2)
    (2, inf, -3)
    """
    p = _prime_of(base)
    if isinstance(q, int):
        return vp_int(q, p)
    q = as_rat(q)
    if q == 0:
        return INF
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)


# grouped value-group operations ---------------------------------------------


def _check(a: object) -> None:
    if a is NEG_INF:
        raise InvalidOperand("arithmetic on -inf")
    if not (a is INF or isinstance(a, Rational)):
        raise InvalidOperand(f"not a value: {a!r}")


def val_add(a: Val, b: Val) -> Val:
    _check(a)
    _check(b)
    return a + b


def val_min(*vals: Val) -> Val:
    return min(vals)


def val_compare(a: Val, b: Val) -> int:
    """Three-way comparison: -1, 0 or 1."""
    if a == b:
        return 0
    return -1 if a < b else 1


def val_scale(a: Val, q: object) -> Val:
    _check(a)
    return a * as_rat(q)


def format_val(a: Val) -> str:
    """Serialize a value as "a/b" (or "inf" / "-inf")."""
    if a is INF or a is NEG_INF:
        return repr(a)
    a = as_rat(a)
    return f"{a.numerator}/{a.denominator}"


def parse_val(s: str) -> Val:
    s = s.strip()
    if s in ("inf", "+inf"):
        return INF
    if s == "-inf":
        return NEG_INF
    return Fraction(s)
