"""Finite fields, explicit extension towers and factorization over them.

Every field is stored flat as ``F_p[t]/(h)``; an extension built with
:func:`ff_extend` remembers its base field, the image of the base generator
and the image of the adjoined root, so elements can be moved up the tower
(:meth:`FqCtx.embed`) and read back in tower coordinates
(:meth:`FqCtx.to_tower`).  Field elements are tuples of ``n`` ints in
``[0, p)``.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .arith import InvalidOperand, is_prime

__all__ = [
    "FqCtx",
    "FqPoly",
    "DEFAULT_SEED",
    "ff_extend",
    "ff_factor",
    "ff_is_irreducible",
    "prime_field",
]

DEFAULT_SEED = 20240601

Elem = tuple


# linear algebra over F_p ------------------------------------------------------


def _rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    m = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def _mat_inverse(a: list[list[int]], p: int) -> list[list[int]]:
    n = len(a)
    aug = [row[:] + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = _rref(aug, p)
    if pivots[:n] != list(range(n)):
        raise InvalidOperand("singular matrix")
    return [row[n:] for row in red]


def _mat_vec(a: list[list[int]], v: Sequence[int], p: int) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) % p for row in a]


# fields --------------------------------------------------------------------------


class FqCtx:
    """A finite field F_p[t]/(h), optionally an explicit extension of a base."""

    def __init__(
        self,
        p: int,
        h: Sequence[int],
        base: Optional["FqCtx"] = None,
        step_modulus: Optional["FqPoly"] = None,
    ) -> None:
        self.p = p
        self.h = tuple(h)
        self.n = len(h) - 1
        self.q = p**self.n
        self.base = base
        self.step_modulus = step_modulus
        # filled in by ff_extend
        self._embed_matrix: list[list[int]] | None = None
        self._tower_matrix: list[list[int]] | None = None
        self.root: Elem | None = None
        self.zero: Elem = (0,) * self.n
        self.one: Elem = (1,) + (0,) * (self.n - 1)
        self._mul_cache: dict = {}

    @property
    def degree(self) -> int:
        """Flattened degree over F_p."""
        return self.n

    def __repr__(self) -> str:
        if self.n == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.n}"

    # element arithmetic ---------------------------------------------------------
    def from_int(self, c: int) -> Elem:
        return ((c % self.p),) + (0,) * (self.n - 1)

    def gen(self) -> Elem:
        if self.n == 1:
            raise InvalidOperand("the prime field has no generator over itself")
        return (0, 1) + (0,) * (self.n - 2)

    def add(self, a: Elem, b: Elem) -> Elem:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: Elem, b: Elem) -> Elem:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: Elem) -> Elem:
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a: Elem, b: Elem) -> Elem:
        p, n = self.p, self.n
        if n == 1:
            return ((a[0] * b[0]) % p,)
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        h = self.h
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(n):
                    prod[k - n + j] -= c * h[j]
        out = tuple(x % p for x in prod[:n])
        if len(self._mul_cache) < 200_000:
            self._mul_cache[key] = out
        return out

    def scale(self, a: Elem, c: int) -> Elem:
        p = self.p
        return tuple((x * c) % p for x in a)

    def pow(self, a: Elem, e: int) -> Elem:
        if e < 0:
            a = self.inv(a)
            e = -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def inv(self, a: Elem) -> Elem:
        if not any(a):
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.n == 1:
            return (pow(a[0], self.p - 2, self.p),)
        return self.pow(a, self.q - 2)

    def div(self, a: Elem, b: Elem) -> Elem:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Elem) -> bool:
        return not any(a)

    def pth_root(self, a: Elem) -> Elem:
        return self.pow(a, self.q // self.p)

    def elements(self) -> Iterator[Elem]:
        p, n = self.p, self.n
        for i in range(self.q):
            digits = []
            for _ in range(n):
                i, r = divmod(i, p)
                digits.append(r)
            yield tuple(digits)

    def random_element(self, rng: random.Random) -> Elem:
        return tuple(rng.randrange(self.p) for _ in range(self.n))

    # tower structure -----------------------------------------------------------
    def embed(self, a: Elem) -> Elem:
        """Image of an element of ``self.base``."""
        if self.base is None:
            raise InvalidOperand("prime field has no base to embed from")
        if self._embed_matrix is None:
            return tuple(a)
        return tuple(_mat_vec(self._embed_matrix, a, self.p))

    def embed_from(self, a: Elem, ctx: "FqCtx") -> Elem:
        """Image of an element of any field below ``self`` in its tower."""
        if ctx is self:
            return a
        if self.base is None:
            raise InvalidOperand(f"{ctx!r} is not below {self!r}")
        return self.embed(self.base.embed_from(a, ctx))

    def to_tower(self, a: Elem) -> list[Elem]:
        """Coordinates of ``a`` in base-field powers of the adjoined root."""
        if self.base is None:
            raise InvalidOperand("prime field has no tower coordinates")
        d = self.step_modulus.degree
        if self._tower_matrix is None:
            # degree-one step: the field equals its base
            return [tuple(a)] + [self.base.zero] * (d - 1) if d > 1 else [tuple(a)]
        coords = _mat_vec(self._tower_matrix, a, self.p)
        nb = self.base.n
        return [tuple(coords[j * nb:(j + 1) * nb]) for j in range(d)]

    def from_tower(self, coords: Sequence[Elem]) -> Elem:
        acc = self.zero
        zpow = self.one
        for c in coords:
            acc = self.add(acc, self.mul(self.embed(c), zpow))
            zpow = self.mul(zpow, self.root)
        return acc

    def elem_str(self, a: Elem) -> str:
        if self.n == 1:
            return str(a[0])
        terms = []
        for i in range(self.n - 1, -1, -1):
            c = a[i]
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(mono if c == 1 and mono else (f"{c}*{mono}" if mono else str(c)))
        return "+".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def prime_field(p: int) -> FqCtx:
    if not is_prime(p):
        raise InvalidOperand(f"{p} is not prime")
    return FqCtx(p, (0, 1))


# polynomials over a field -----------------------------------------------------------


class FqPoly:
    """Univariate polynomial over an :class:`FqCtx` (ascending coefficients)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FqCtx, coeffs: Sequence[Elem]) -> None:
        cs = [tuple(c) for c in coeffs]
        while cs and not any(cs[-1]):
            cs.pop()
        self.ctx = ctx
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def from_ints(cls, ctx: FqCtx, ints: Sequence[int]) -> "FqPoly":
        return cls(ctx, [ctx.from_int(c) for c in ints])

    @classmethod
    def x(cls, ctx: FqCtx) -> "FqPoly":
        return cls(ctx, [ctx.zero, ctx.one])

    @classmethod
    def one(cls, ctx: FqCtx) -> "FqPoly":
        return cls(ctx, [ctx.one])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise InvalidOperand("degree of the zero polynomial is undefined")
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Elem:
        return self.coeffs[-1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FqPoly) and other.ctx is self.ctx and other.coeffs == self.coeffs

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.coeffs))

    def sort_key(self) -> tuple:
        return (len(self.coeffs), tuple(reversed(self.coeffs)))

    def __add__(self, other: "FqPoly") -> "FqPoly":
        k = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = k.add(out[i], c)
        return FqPoly(k, out)

    def __neg__(self) -> "FqPoly":
        return FqPoly(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other: "FqPoly") -> "FqPoly":
        return self + (-other)

    def __mul__(self, other: "FqPoly") -> "FqPoly":
        k = self.ctx
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return FqPoly(k, [])
        out = [k.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if any(x):
                for j, y in enumerate(b):
                    if any(y):
                        out[i + j] = k.add(out[i + j], k.mul(x, y))
        return FqPoly(k, out)

    def scale(self, c: Elem) -> "FqPoly":
        return FqPoly(self.ctx, [self.ctx.mul(c, x) for x in self.coeffs])

    def monic(self) -> "FqPoly":
        if not self.coeffs:
            raise InvalidOperand("zero polynomial has no monic associate")
        return self.scale(self.ctx.inv(self.lc))

    def __divmod__(self, other: "FqPoly") -> tuple["FqPoly", "FqPoly"]:
        k = self.ctx
        if not other.coeffs:
            raise InvalidOperand("division by the zero polynomial")
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(r) - 1 < db:
            return FqPoly(k, []), FqPoly(k, r)
        inv_lc = k.inv(b[-1])
        q = [k.zero] * (len(r) - db)
        for i in range(len(r) - 1 - db, -1, -1):
            c = r[i + db]
            if not any(c):
                continue
            c = k.mul(c, inv_lc)
            q[i] = c
            for j in range(db + 1):
                r[i + j] = k.sub(r[i + j], k.mul(c, b[j]))
        return FqPoly(k, q), FqPoly(k, r[:db])

    def __floordiv__(self, other: "FqPoly") -> "FqPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "FqPoly") -> "FqPoly":
        return divmod(self, other)[1]

    def __call__(self, a: Elem) -> Elem:
        k = self.ctx
        acc = k.zero
        for c in reversed(self.coeffs):
            acc = k.add(k.mul(acc, a), c)
        return acc

    def derivative(self) -> "FqPoly":
        k = self.ctx
        return FqPoly(k, [k.scale(c, i) for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other: "FqPoly") -> "FqPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a if a.is_zero() else a.monic()

    def powmod(self, e: int, mod: "FqPoly") -> "FqPoly":
        result = FqPoly.one(self.ctx) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            e >>= 1
            if e:
                base = (base * base) % mod
        return result

    def map_coeffs(self, ctx: FqCtx, fn) -> "FqPoly":
        return FqPoly(ctx, [fn(c) for c in self.coeffs])

    def __str__(self) -> str:
        k = self.ctx
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not any(c):
                continue
            cs = k.elem_str(c)
            mono = "" if i == 0 else ("y" if i == 1 else f"y^{i}")
            if not mono:
                terms.append(cs)
            elif c == k.one:
                terms.append(mono)
            else:
                terms.append(f"({cs})*{mono}" if "+" in cs else f"{cs}*{mono}")
        return "+".join(terms)

    def __repr__(self) -> str:
        return f"FqPoly({self.ctx!r}, {str(self)!r})"


# factorization ----------------------------------------------------------------------


def _pth_root_poly(f: FqPoly) -> FqPoly:
    k = f.ctx
    p = k.p
    return FqPoly(k, [k.pth_root(c) for c in f.coeffs[::p]])


def _squarefree(f: FqPoly) -> list[tuple[FqPoly, int]]:
    """Squarefree decomposition of a monic polynomial: [(g_i, i)] with f = prod g_i^i."""
    k = f.ctx
    out: dict[int, FqPoly] = {}
    one = FqPoly.one(k)

    def put(g: FqPoly, mult: int) -> None:
        if g.degree > 0:
            out[mult] = out[mult] * g if mult in out else g

    def rec(f: FqPoly, scale: int) -> None:
        if f.degree == 0:
            return
        fp = f.derivative()
        if fp.is_zero():
            rec(_pth_root_poly(f), scale * k.p)
            return
        c = f.gcd(fp)
        w = f // c
        i = 1
        while w != one:
            y = w.gcd(c)
            put(w // y, i * scale)
            i += 1
            w = y
            c = c // y
        if c != one:
            rec(_pth_root_poly(c), scale * k.p)

    rec(f, 1)
    return sorted(((g.monic(), m) for m, g in out.items()), key=lambda t: t[1])


def _distinct_degree(f: FqPoly) -> list[tuple[FqPoly, int]]:
    k = f.ctx
    x = FqPoly.x(k)
    one = FqPoly.one(k)
    out = []
    h = x % f
    i = 1
    while f.degree >= 2 * i:
        h = h.powmod(k.q, f)
        g = (h - x).gcd(f)
        if g != one:
            out.append((g, i))
            f = f // g
            h = h % f
        i += 1
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def _equal_degree(f: FqPoly, d: int, rng: random.Random) -> list[FqPoly]:
    if f.degree == d:
        return [f.monic()]
    k = f.ctx
    n = f.degree
    while True:
        a = FqPoly(k, [k.random_element(rng) for _ in range(n)])
        if a.degree < 1 if not a.is_zero() else True:
            continue
        if k.p == 2:
            # trace map to F_2
            b = a % f
            t = b
            for _ in range(k.n * d - 1):
                t = (t * t) % f
                b = b + t
        else:
            b = a.powmod((k.q**d - 1) // 2, f) - FqPoly.one(k)
        g = b.gcd(f)
        if 0 < g.degree < n:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def ff_factor(f: FqPoly, seed: int = DEFAULT_SEED) -> list[tuple[FqPoly, int]]:
    """Monic irreducible factors with multiplicities, canonically sorted.

    The product of the factors (with multiplicity) times ``f.lc`` is ``f``.
    """
    if f.is_zero():
        raise InvalidOperand("cannot factor the zero polynomial")
    return list(_factor_cached(f, seed))


@lru_cache(maxsize=65536)
def _factor_cached(f: FqPoly, seed: int) -> tuple:
    if f.degree == 0:
        return ()
    rng = random.Random(seed)
    out = []
    for g, m in _squarefree(f.monic()):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree(h, d, rng):
                out.append((irr, m))
    out.sort(key=lambda t: (t[0].sort_key(), t[1]))
    return tuple(out)


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def ff_is_irreducible(f: FqPoly) -> bool:
    """Rabin's irreducibility test."""
    if f.is_zero() or f.degree < 1:
        raise InvalidOperand("irreducibility is only defined for non-constant polynomials")
    if f.degree == 1:
        return True
    return _irreducible_cached(f.monic())


@lru_cache(maxsize=65536)
def _irreducible_cached(f: FqPoly) -> bool:
    n = f.degree
    k = f.ctx
    x = FqPoly.x(k)
    for r in _prime_divisors(n):
        h = x.powmod(k.q ** (n // r), f)
        if (h - x).gcd(f).degree != 0:
            return False
    return ((x.powmod(k.q**n, f)) - x).is_zero()


# extensions --------------------------------------------------------------------------


def _tower_vec(poly_coeffs: Sequence[Elem], d: int, nb: int) -> list[int]:
    v = [0] * (d * nb)
    for j, c in enumerate(poly_coeffs):
        v[j * nb:(j + 1) * nb] = list(c)
    return v


def ff_extend(ctx: FqCtx, modulus: FqPoly) -> FqCtx:
    """The field ctx[y]/(modulus), flattened to F_p[t]/(h) with a computed embedding."""
    if modulus.ctx is not ctx:
        raise InvalidOperand("modulus must have coefficients in the base field")
    if modulus.is_zero() or modulus.degree < 1 or not ff_is_irreducible(modulus):
        raise InvalidOperand("extension modulus must be irreducible")
    return _extend_cached(modulus.monic())


@lru_cache(maxsize=16384)
def _extend_cached(modulus: FqPoly) -> FqCtx:
    # one field per (base, modulus): equal residue fields are the same object
    ctx = modulus.ctx
    p, nb, d = ctx.p, ctx.n, modulus.degree
    if d == 1:
        new = FqCtx(p, ctx.h, base=ctx, step_modulus=modulus)
        new.root = ctx.neg(modulus.coeffs[0])
        return new
    N = nb * d
    # enumerate candidate primitive elements y + c in deterministic order
    y = FqPoly.x(ctx)
    candidates = [y] + [y + FqPoly(ctx, [c]) for c in ctx.elements() if any(c)]
    if nb > 1:
        candidates += [
            FqPoly(ctx, [c0, c1]) for c1 in ctx.elements() for c0 in ctx.elements() if any(c1)
        ]
    for alpha in candidates:
        powers = []
        cur = FqPoly.one(ctx)
        for _ in range(N):
            powers.append(_tower_vec(cur.coeffs, d, nb))
            cur = (cur * alpha) % modulus
        _, piv = _rref(powers, p)
        if len(piv) == N:
            break
    else:  # pragma: no cover - a primitive element always exists
        raise InvalidOperand("no primitive element found")
    # columns of V are the powers of alpha in tower coordinates
    V = [[powers[j][i] for j in range(N)] for i in range(N)]
    Vinv = _mat_inverse(V, p)
    top = _tower_vec(cur.coeffs, d, nb)
    c = _mat_vec(Vinv, top, p)
    h = [(-x) % p for x in c] + [1]
    new = FqCtx(p, h, base=ctx, step_modulus=modulus)
    new._tower_matrix = V
    new._embed_matrix = [row[:nb] for row in Vinv]
    new.root = tuple(_mat_vec(Vinv, _tower_vec([ctx.zero, ctx.one], d, nb), p))
    return new
