"""Dense univariate polynomials over Q.

Coefficients are stored in ascending degree order as Python ints whenever
they are integral and as :class:`~fractions.Fraction` otherwise, so the
integral case (which is what the valuation engine sees almost exclusively)
runs on machine-friendly ints.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd, lcm
from typing import Iterable, Sequence, Union

from .arith import InvalidOperand, as_rat

__all__ = [
    "Poly",
    "X",
    "phi_expansion",
    "resultant",
    "taylor_coeffs",
]

Coeff = Union[int, Fraction]


def _norm_coeff(c: object) -> Coeff:
    if isinstance(c, int):
        return c
    c = as_rat(c)
    return c.numerator if c.denominator == 1 else c


def _strip(cs: list) -> list:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


# list-level kernels (ascending coefficient lists, no trailing zeros) --------


def _add(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _strip(out)


def _sub(a: Sequence, b: Sequence) -> list:
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _strip(out)


def _mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _strip(out)


def _divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    if not b:
        raise InvalidOperand("division by the zero polynomial")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    lb = b[-1]
    monic = lb == 1
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db]
        if not c:
            continue
        if not monic:
            c = Fraction(c) / lb
            if c.denominator == 1:
                c = c.numerator
        q[k] = c
        for j in range(db):
            r[k + j] -= c * b[j]
        r[k + db] = 0
    return _strip(q), _strip(r[:db])


def _expand(a: Sequence, phi: Sequence) -> list[list]:
    """Digits of ``a`` in base ``phi`` (phi monic); no trailing empty digit."""
    out = []
    while a:
        a, r = _divmod(a, phi)
        out.append(r)
    return out


def _horner(digits: Sequence[Sequence], phi: Sequence) -> list:
    acc: list = []
    for d in reversed(digits):
        acc = _add(_mul(acc, phi), d)
    return acc


class Poly:
    """An immutable polynomial with rational coefficients.

    >>> f = Poly([36, 0, -4, 0, 1])
    >>> str(f)
    'x^4-4*x^2+36'
    >>> q, r = divmod(f, Poly([-2, 0, 1]))
    >>> str(q), str(r)
    ('x^2-2', '32')
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Iterable[object] = ()) -> None:
        self._c: tuple = tuple(_strip([_norm_coeff(c) for c in coeffs]))
        self._hash: int | None = None

    @classmethod
    def _raw(cls, cs: list) -> "Poly":
        p = object.__new__(cls)
        p._c = tuple(cs)
        p._hash = None
        return p

    @classmethod
    def const(cls, c: object) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, n: int, c: object = 1) -> "Poly":
        return cls([0] * n + [c])

    @classmethod
    def linear(cls, a: object) -> "Poly":
        """The monic polynomial x - a."""
        return cls([-as_rat(a), 1])

    # basic accessors --------------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        return self._c

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> int:
        if not self._c:
            raise InvalidOperand("degree of the zero polynomial is undefined")
        return len(self._c) - 1

    @property
    def lc(self) -> Coeff:
        if not self._c:
            raise InvalidOperand("zero polynomial has no leading coefficient")
        return self._c[-1]

    def is_monic(self) -> bool:
        return bool(self._c) and self._c[-1] == 1

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._c)

    def __getitem__(self, i: int) -> Coeff:
        return self._c[i] if 0 <= i < len(self._c) else 0

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    # arithmetic -------------------------------------------------------------
    @staticmethod
    def _coerce(other: object) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly([other])

    def __add__(self, other: object) -> "Poly":
        return Poly._raw(_add(self._c, Poly._coerce(other)._c))

    __radd__ = __add__

    def __sub__(self, other: object) -> "Poly":
        return Poly._raw(_sub(self._c, Poly._coerce(other)._c))

    def __rsub__(self, other: object) -> "Poly":
        return Poly._coerce(other) - self

    def __neg__(self) -> "Poly":
        return Poly._raw([-c for c in self._c])

    def __mul__(self, other: object) -> "Poly":
        if isinstance(other, Poly):
            return Poly._raw(_mul(self._c, other._c))
        c = _norm_coeff(other)
        return Poly._raw(_strip([_norm_coeff(a * c) for a in self._c]))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise InvalidOperand("negative exponent")
        result, base = [1], list(self._c)
        while n:
            if n & 1:
                result = _mul(result, base)
            n >>= 1
            if n:
                base = _mul(base, base)
        return Poly._raw(result)

    def __divmod__(self, other: object) -> tuple["Poly", "Poly"]:
        q, r = _divmod(self._c, Poly._coerce(other)._c)
        return Poly(q), Poly(r)

    def __floordiv__(self, other: object) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: object) -> "Poly":
        return divmod(self, other)[1]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == Poly([other])._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._c)
        return self._hash

    def __call__(self, a: object) -> Coeff:
        acc: Coeff = 0
        for c in reversed(self._c):
            acc = acc * a + c
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw([i * c for i, c in enumerate(self._c)][1:])

    def monic(self) -> "Poly":
        lc = Fraction(self.lc)
        return Poly([Fraction(c) / lc for c in self._c])

    def shift(self, a: object) -> "Poly":
        """f(x + a)."""
        out: list = []
        lin = [_norm_coeff(a), 1]
        for c in reversed(self._c):
            out = _add(_mul(out, lin), [c])
        return Poly._raw(out)

    def compose(self, g: "Poly") -> "Poly":
        out: list = []
        for c in reversed(self._c):
            out = _add(_mul(out, g._c), [c])
        return Poly._raw(out)

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd over Q (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a if a.is_zero() else a.monic()

    def denominator(self) -> int:
        d = 1
        for c in self._c:
            if isinstance(c, Fraction):
                d = lcm(d, c.denominator)
        return d

    def integral_multiple(self) -> tuple[list[int], int]:
        """(integer coefficients, d) with self = coefficients / d."""
        d = self.denominator()
        return [int(c * d) for c in self._c], d

    # rendering --------------------------------------------------------------
    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts: list[str] = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append(sign + body)
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


X = Poly([0, 1])


def phi_expansion(f: Poly, phi: Poly) -> list[Poly]:
    """Coefficients [a_0, a_1, ...] with f = sum a_s phi^s and deg a_s < deg phi.

    >>> [str(a) for a in phi_expansion(Poly([36, 0, -4, 0, 1]), Poly([-2, 0, 1]))]
    ['32', '0', '1']
    """
    if phi.is_zero() or phi.degree < 1 or not phi.is_monic():
        raise InvalidOperand("expansion base must be monic of positive degree")
    return [Poly._raw(d) for d in _expand(f.coeffs, phi.coeffs)]


def taylor_coeffs(f: Poly) -> list[Poly]:
    """[c_0, ..., c_n] with c_i = f^(i)/i!, so that f(x + y) = sum c_i(x) y^i."""
    c = f.coeffs
    n = len(c)
    return [Poly._raw(_strip([comb(j + i, i) * c[j + i] for j in range(n - i)])) for i in range(n)]


# resultants ------------------------------------------------------------------


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        mkk = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * mkk - mik * rowk[j]) // prev
        prev = mkk
    return sign * m[n - 1][n - 1]


def sylvester_matrix(a: Sequence[int], b: Sequence[int]) -> list[list[int]]:
    da, db = len(a) - 1, len(b) - 1
    size = da + db
    rows = []
    ra = list(reversed(a))
    rb = list(reversed(b))
    for i in range(db):
        rows.append([0] * i + ra + [0] * (size - i - len(ra)))
    for i in range(da):
        rows.append([0] * i + rb + [0] * (size - i - len(rb)))
    return rows


def _content(a: Sequence[int]) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
    return g


def _prem(a: list[int], b: list[int]) -> list[int]:
    lb = b[-1]
    db = len(b) - 1
    e = len(a) - len(b) + 1
    r = list(a)
    while r and len(r) - 1 >= db:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for j, bj in enumerate(b):
            r[shift + j] -= c * bj
        _strip(r)
        e -= 1
    f = lb**e
    return [f * x for x in r]


def _res_subresultant(a: list[int], b: list[int]) -> int:
    da, db = len(a) - 1, len(b) - 1
    if db == 0:
        return b[0] ** da
    if da == 0:
        return a[0] ** db
    ca, cb = _content(a), _content(b)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    g = h = 1
    s = 1
    t = ca**db * cb**da
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            s = -1
    while db > 0:
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        a = b
        div = g * h**delta
        b = [x // div for x in r]
        g = a[-1]
        h = g**delta // h ** (delta - 1) if delta >= 1 else h
        if not b:
            return 0
        da, db = len(a) - 1, len(b) - 1
    h = b[-1] ** da // h ** (da - 1) if da >= 1 else h
    return s * t * h


def resultant(f: Poly, g: Poly, method: str = "sylvester") -> Fraction:
    """Res(f, g) = lc(f)^deg(g) * prod_{f(a)=0} g(a), computed exactly.

    Denominators are cleared first and the correction factor is tracked
    exactly, so both methods run over Z.

    >>> resultant(Poly([-2, 0, 1]), Poly([-6, 0, 1]))
    Fraction(16, 1)
    """
    if f.is_zero() or g.is_zero():
        raise InvalidOperand("resultant of the zero polynomial")
    a, da_ = f.integral_multiple()
    b, db_ = g.integral_multiple()
    if method == "sylvester":
        r = _bareiss_det(sylvester_matrix(a, b))
    elif method == "subresultant":
        r = _res_subresultant(a, b)
    else:
        raise InvalidOperand(f"unknown resultant method {method!r}")
    return Fraction(r, da_ ** (len(b) - 1) * db_ ** (len(a) - 1))
