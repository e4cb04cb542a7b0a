"""Inductive valuations on Q[x] over the p-adic base.

A node is stored as a list of *levels* ``(phi_k, gamma_k)``.  Level 0 is the
depth-zero part ``omega_{a, delta}`` with ``phi_0 = x - a`` and
``gamma_0 = delta``; level ``k > 0`` is the ordinary augmentation by
``phi_k`` with value ``gamma_k``.  Degrees strictly increase along the levels
and the value of ``f`` is computed by the usual recursion

    mu_k(f) = min_s  mu_{k-1}(a_s) + s * gamma_k,      f = sum a_s phi_k^s,

with ``mu_{-1}`` the p-adic valuation on constants.

Residues.  Level ``k`` has value group ``Gamma_k = (1/E_k) Z`` and residue
field ``kappa_k`` (``F_p`` at level 0).  For ``alpha`` in ``Gamma_k`` there is
a canonical monomial ``M_k(alpha) = p^n phi_0^{n_0} ... phi_k^{n_k}`` with
``0 <= n_j < e_j``.  The graded class of ``f`` with ``mu_k(f) = alpha`` is
recorded as a polynomial ``P(y)`` over ``kappa_k`` where ``y`` stands for
``Y_k = phi_k^{e_k} / M_{k-1}(e_k gamma_k)``.  Residual polynomials are these
``P`` with the power of ``y`` stripped.  The class of ``Y_k`` in the next
level's residue field is the root ``z_k`` of ``psi_k``, the monic residual
polynomial of ``phi_{k+1}``.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .arith import INF, NEG_INF, InvalidOperand, Val, as_rat, format_val, vp
from .poly import Poly, X, _expand, _mul, _add, _strip, phi_expansion
from .residue import FqCtx, FqPoly, ff_extend, ff_factor, ff_is_irreducible, prime_field

__all__ = [
    "InductiveVal",
    "InvalidAugmentation",
    "NewtonPolygon",
    "Side",
    "augment",
    "depth_zero",
    "in_equiv",
    "is_key",
    "is_minimal",
    "key_lifts",
    "newton_polygon",
    "node_invariants",
    "residual_polynomial",
    "truncation",
    "value",
]


class InvalidAugmentation(InvalidOperand):
    """Raised when an augmentation step is not admissible."""


_CACHE_LIMIT = 50_000


class Level:
    """Per-level data; shared between a node and all nodes built on top of it."""

    __slots__ = (
        "phi", "phic", "gamma", "m", "e", "E", "ctx", "psi_prev", "z_prev",
        "_vcache", "_canon",
    )

    def __init__(self, phi: Poly, gamma: Val, E_prev: int, ctx: FqCtx,
                 psi_prev: Optional[FqPoly], z_prev) -> None:
        self.phi = phi
        self.phic = phi.coeffs
        self.gamma = gamma
        self.m = phi.degree
        if gamma is INF:
            self.e = None
            self.E = None
        else:
            self.e = Fraction(gamma * E_prev).denominator
            self.E = E_prev * self.e
        self.ctx = ctx
        self.psi_prev = psi_prev
        self.z_prev = z_prev
        self._vcache: dict = {}
        self._canon: dict = {}


# level-indexed kernels -------------------------------------------------------------
# ``lv`` is a tuple of Level objects and ``k`` a level index; ``k = -1`` is the
# base valuation on constants.


def _vp_const(c, p: int) -> Val:
    return vp(c, p)


def _value(lv: Sequence[Level], k: int, cs: tuple, p: int) -> Val:
    if not cs:
        return INF
    while k >= 0 and len(cs) - 1 < lv[k].m:
        k -= 1
    if k < 0:
        return _vp_const(cs[0], p)
    L = lv[k]
    hit = L._vcache.get(cs)
    if hit is not None:
        return hit
    g = L.gamma
    best = INF
    for s, d in enumerate(_expand(cs, L.phic)):
        if d:
            v = _value(lv, k - 1, tuple(d), p)
            if s:
                v = v + s * g
            if v < best:
                best = v
    if len(L._vcache) < _CACHE_LIMIT:
        L._vcache[cs] = best
    return best


def _e_prev(lv: Sequence[Level], k: int) -> int:
    return 1 if k < 0 else lv[k].E


def _canon(lv: Sequence[Level], k: int, alpha) -> tuple:
    """Exponents (n_{-1}, n_0, ..., n_k) of the canonical monomial M_k(alpha)."""
    alpha = as_rat(alpha)
    if k < 0:
        if alpha.denominator != 1:
            raise InvalidOperand(f"{alpha} is not in the value group of the base")
        return (alpha.numerator,)
    L = lv[k]
    hit = L._canon.get(alpha)
    if hit is not None:
        return hit
    Ep = _e_prev(lv, k - 1)
    for beta in range(L.e):
        rest = alpha - beta * L.gamma
        if (rest * Ep).denominator == 1:
            break
    else:
        raise InvalidOperand(f"{alpha} is not in the value group of level {k}")
    out = _canon(lv, k - 1, rest) + (beta,)
    L._canon[alpha] = out
    return out


def _vec_add(a: tuple, b: tuple, scale: int = 1) -> tuple:
    return tuple(x + scale * y for x, y in zip(a, b))


def _mono_residue(lv: Sequence[Level], k: int, vec: tuple):
    """Residue in kappa_{k+1} of a value-zero Laurent monomial in p, phi_0..phi_k."""
    if k < 0:
        if vec[0] != 0:
            raise InvalidOperand("monomial does not have value zero")
        return None  # the unit 1 of F_p, resolved by the caller
    L = lv[k]
    n = vec[-1]
    if n % L.e:
        raise InvalidOperand("monomial does not have value zero")
    u = n // L.e
    rest = vec[:-1]
    if u:
        rest = _vec_add(rest, _canon(lv, k - 1, L.e * L.gamma), u)
    low = _mono_residue(lv, k - 1, rest)
    up = lv[k + 1]
    K = up.ctx
    r = K.one if low is None else K.embed(low)
    if u:
        r = K.mul(r, K.pow(up.z_prev, u))
    return r


def _mono_res_in(lv: Sequence[Level], k: int, vec: tuple):
    """Like :func:`_mono_residue` but always returns an element of kappa_{k+1}."""
    r = _mono_residue(lv, k, vec)
    if r is None:
        return lv[0].ctx.one
    return r


def _red(lv: Sequence[Level], k: int, cs: tuple, p: int):
    """Residue in kappa_k of a / M_{k-1}(mu_{k-1}(a)) for deg a < m_k."""
    if k == 0:
        c = as_rat(cs[0])
        v = vp(c, p)
        u = c / Fraction(p) ** v
        return lv[0].ctx.from_int(u.numerator * pow(u.denominator, -1, p))
    _alpha, P = _graded(lv, k - 1, cs, p)
    K = lv[k].ctx
    z = lv[k].z_prev
    acc = K.zero
    for c in reversed(P.coeffs):
        acc = K.add(K.mul(acc, z), K.embed(c))
    return acc


def _graded(lv: Sequence[Level], k: int, cs: tuple, p: int):
    """(mu_k(f), P) with P over kappa_k the graded class of f relative to M_k(mu_k(f))."""
    L = lv[k]
    K = L.ctx
    digits = [tuple(d) for d in _expand(cs, L.phic)]
    vals = [(_value(lv, k - 1, d, p) if d else INF) for d in digits]
    alpha = min(v + s * L.gamma if s else v for s, v in enumerate(vals))
    if alpha is INF:
        raise InvalidOperand("graded class of zero")
    beta = _canon(lv, k, alpha)[-1]
    top = _canon(lv, k - 1, alpha - beta * L.gamma)
    step = _canon(lv, k - 1, L.e * L.gamma)
    coeffs: dict[int, object] = {}
    for s, v in enumerate(vals):
        if v is INF or v + s * L.gamma != alpha:
            continue
        t = (s - beta) // L.e
        vec = _vec_add(_vec_add(_canon(lv, k - 1, v), step, t), top, -1)
        c = K.mul(_red(lv, k, digits[s], p), _mono_res_in(lv, k - 1, vec))
        coeffs[t] = c
    n = max(coeffs) + 1
    return alpha, FqPoly(K, [coeffs.get(t, K.zero) for t in range(n)])


def _lift(lv: Sequence[Level], k: int, r, alpha, p: int) -> list:
    """Coefficient list b with deg b < m_k, mu_{k-1}(b) = alpha and red_k(b) = r."""
    K = lv[k].ctx
    if k == 0:
        a = as_rat(alpha)
        if a.denominator != 1:
            raise InvalidOperand("constant lift needs an integral value")
        n = a.numerator
        c = r[0]
        return [c * p**n] if n >= 0 else [Fraction(c, p**-n)]
    j = k - 1
    Lj = lv[j]
    Kj = Lj.ctx
    coords = K.to_tower(r)
    beta = _canon(lv, j, alpha)[-1]
    top = _canon(lv, j - 1, alpha - beta * Lj.gamma)
    step = _canon(lv, j - 1, Lj.e * Lj.gamma)
    out: list = []
    for u, q in enumerate(coords):
        if Kj.is_zero(q):
            continue
        s = beta + u * Lj.e
        a_u = alpha - s * Lj.gamma
        vec = _vec_add(_vec_add(_canon(lv, j - 1, a_u), step, u), top, -1)
        carry = _mono_res_in(lv, j - 1, vec)
        b_u = _lift(lv, j, Kj.div(q, carry), a_u, p)
        term = _mul(b_u, _poly_pow(Lj.phic, s))
        out = _add(out, term)
    return out


def _poly_pow(c: tuple, n: int) -> list:
    acc: list = [1]
    for _ in range(n):
        acc = _mul(acc, c)
    return acc


def _strip_y(P: FqPoly) -> tuple[int, FqPoly]:
    o = 0
    while o < len(P.coeffs) and P.ctx.is_zero(P.coeffs[o]):
        o += 1
    return o, FqPoly(P.ctx, P.coeffs[o:])


_LEVELS: "OrderedDict[tuple, tuple]" = OrderedDict()
_LEVELS_LIMIT = 4096


def _make_levels(p: int, steps: Sequence[tuple[Poly, Val]], reuse: Sequence[Level] = ()) -> tuple:
    lv: list[Level] = list(reuse)
    for k in range(len(reuse), len(steps)):
        phi, gamma = steps[k]
        # inner levels depend only on their prefix, so nodes sharing one share its level
        key = (p, tuple(steps[:k + 1])) if gamma is not INF else None
        hit = _LEVELS.get(key) if key is not None else None
        if hit is not None and hit[0] is (lv[-1] if lv else None):
            _LEVELS.move_to_end(key)
            lv.append(hit[1])
            continue
        if k == 0:
            L = Level(phi, gamma, 1, prime_field(p), None, None)
        else:
            prev = lv[k - 1]
            if prev.gamma is INF:
                raise InvalidAugmentation("cannot augment a finite leaf")
            _a, P = _graded(lv, k - 1, phi.coeffs, p)
            o, R = _strip_y(P)
            if o or R.degree < 1:
                raise InvalidAugmentation(f"{phi} is not a key of degree above the last key")
            psi = R.monic()
            ext = ff_extend(prev.ctx, psi)
            L = Level(phi, gamma, prev.E, ext, psi, ext.root)
        if key is not None:
            _LEVELS[key] = (lv[-1] if lv else None, L)
            if len(_LEVELS) > _LEVELS_LIMIT:
                _LEVELS.popitem(last=False)
        lv.append(L)
    return tuple(lv)


# nodes --------------------------------------------------------------------------------


class InductiveVal:
    """A node of the valuative tree: depth-zero part plus ordinary augmentations."""

    __slots__ = ("p", "_lv")

    def __init__(self, p: int, levels: tuple) -> None:
        self.p = p
        self._lv = levels

    # construction -------------------------------------------------------------
    @classmethod
    def _from_steps(cls, p: int, steps: Sequence[tuple[Poly, Val]],
                    reuse: Sequence[Level] = ()) -> "InductiveVal":
        return cls(p, _make_levels(p, steps, reuse))

    def prefix(self, k: int) -> "InductiveVal":
        """The node made of levels 0..k."""
        if not 0 <= k < len(self._lv):
            raise IndexError(k)
        return InductiveVal(self.p, self._lv[:k + 1])

    # accessors -------------------------------------------------------------------
    @property
    def depth(self) -> int:
        return len(self._lv) - 1

    @property
    def steps(self) -> list[tuple[Poly, Val]]:
        return [(L.phi, L.gamma) for L in self._lv]

    @property
    def keys(self) -> list[Poly]:
        return [L.phi for L in self._lv]

    @property
    def gammas(self) -> list[Val]:
        return [L.gamma for L in self._lv]

    @property
    def center(self):
        return -self._lv[0].phi[0]

    @property
    def last_key(self) -> Poly:
        return self._lv[-1].phi

    @property
    def residue_field(self) -> FqCtx:
        return self._lv[-1].ctx

    def level_data(self, k: int) -> dict:
        L = self._lv[k]
        return {
            "phi": L.phi, "gamma": L.gamma, "m": L.m, "e": L.e,
            "ctx": L.ctx, "psi_prev": L.psi_prev,
        }

    def is_leaf(self) -> bool:
        return self._lv[-1].gamma is INF

    @property
    def support(self) -> Optional[Poly]:
        return self._lv[-1].phi if self.is_leaf() else None

    def degree(self) -> int:
        return self._lv[-1].m

    def sv(self) -> Val:
        return self._lv[-1].gamma

    def wt(self) -> Val:
        if self.is_leaf():
            raise InvalidOperand("a finite leaf has no weight")
        return Fraction(self._lv[-1].gamma) / self._lv[-1].m

    # evaluation ---------------------------------------------------------------------
    def __call__(self, f: Poly) -> Val:
        return _value(self._lv, len(self._lv) - 1, _coeffs(f), self.p)

    value = __call__

    def graded(self, f: Poly) -> tuple[Val, FqPoly]:
        """(mu(f), P) where P over the residue field is the graded class of f."""
        if self.is_leaf():
            raise InvalidOperand("graded classes are only defined at inner nodes")
        return _graded(self._lv, len(self._lv) - 1, _coeffs(f), self.p)

    def residue_of(self, f: Poly):
        """Residue of f / M(mu(f)) for deg f below the last key degree."""
        cs = _coeffs(f)
        k = len(self._lv) - 1
        if cs and len(cs) - 1 >= self._lv[k].m:
            raise InvalidOperand("residue_of needs deg f < deg of the last key")
        return _red(self._lv, k, cs, self.p)

    # structure ---------------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, InductiveVal)
            and other.p == self.p
            and other.steps == self.steps
        )

    def __hash__(self) -> int:
        return hash((self.p, tuple((L.phi, L.gamma) for L in self._lv)))

    def __str__(self) -> str:
        L0 = self._lv[0]
        s = f"omega_{{{_fmt(self.center)},{_fmt(L0.gamma)}}}"
        for L in self._lv[1:]:
            s = f"[{s}; {L.phi}, {_fmt(L.gamma)}]"
        return s

    def __repr__(self) -> str:
        return f"InductiveVal(p={self.p}, {self})"


def _fmt(v) -> str:
    if v is INF or v is NEG_INF:
        return repr(v)
    v = as_rat(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _coeffs(f) -> tuple:
    if isinstance(f, Poly):
        return f.coeffs
    return Poly([f]).coeffs


class _RootNode:
    """The root of the tree: weight -inf, evaluates constants by v_p only."""

    depth = -1
    _lv: tuple = ()

    def __init__(self, p: int) -> None:
        self.p = p

    def wt(self):
        return NEG_INF

    def is_leaf(self) -> bool:
        return False

    def __str__(self) -> str:
        return "omega_{-inf}"

    def __repr__(self) -> str:
        return f"RootNode(p={self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _RootNode) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("root", self.p))


RootNode = _RootNode


# public operations -----------------------------------------------------------------------


def depth_zero(a, delta: Val, p: int) -> InductiveVal:
    """The valuation omega_{a, delta}: min over Taylor coefficients at a of v(a_s) + s*delta.

    >>> str(depth_zero(0, Fraction(1, 2), 2))
    'omega_{0,1/2}'
    >>> depth_zero(0, Fraction(1, 2), 2)(Poly([-2, 0, 1]))
    Fraction(1, 1)
    """
    if delta is NEG_INF:
        raise InvalidOperand("omega_{-inf} is not constructible")
    if delta is not INF:
        delta = as_rat(delta)
    return InductiveVal._from_steps(p, [(Poly.linear(a), delta)])


def value(mu: InductiveVal, f: Poly) -> Val:
    return mu(f)


def node_invariants(mu: InductiveVal) -> tuple[int, Val, Val]:
    """(deg, sv, wt) of an inner node."""
    if mu.is_leaf():
        raise InvalidOperand("node invariants are undefined at a finite leaf")
    return mu.degree(), mu.sv(), mu.wt()


def is_minimal(mu: InductiveVal, g: Poly) -> bool:
    if mu.is_leaf():
        raise InvalidOperand("minimality is defined at inner nodes")
    if g.is_zero() or g.degree < 1:
        return False
    v = mu(g)
    return v is not INF and Fraction(v) / g.degree == mu.wt()


def in_equiv(mu, f: Poly, g: Poly) -> bool:
    if f == g:
        return True
    vf, vg = mu(f), mu(g)
    if vf != vg:
        return False
    return mu(f - g) > vf


def is_key(mu: InductiveVal, phi: Poly) -> bool:
    """Minimal and with irreducible residual datum (minimal-degree keys need only minimality)."""
    if not phi.is_monic() or phi.degree < 1:
        return False
    if not is_minimal(mu, phi):
        return False
    if phi.degree == mu.degree():
        return True
    _alpha, P = mu.graded(phi)
    o, R = _strip_y(P)
    if o or R.degree < 1:
        return False
    return ff_is_irreducible(R)


def augment(mu: InductiveVal, phi: Poly, gamma: Val) -> InductiveVal:
    """The augmented node [mu; phi, gamma].

    A key of the same degree as the last key replaces it, which keeps the
    degrees of the stored levels strictly increasing.
    """
    if mu.is_leaf():
        raise InvalidAugmentation("cannot augment a finite leaf")
    if not is_key(mu, phi):
        raise InvalidAugmentation(f"{phi} is not a key polynomial for {mu}")
    if gamma is not INF:
        gamma = as_rat(gamma)
    if not gamma > mu(phi):
        raise InvalidAugmentation("gamma must exceed mu(phi)")
    return _augment_unchecked(mu, phi, gamma)


def _augment_unchecked(mu, phi: Poly, gamma: Val) -> InductiveVal:
    if isinstance(mu, _RootNode):
        return InductiveVal._from_steps(mu.p, [(phi, gamma)])
    lv = mu._lv
    if phi.degree == lv[-1].m:
        base = lv[:-1]
    else:
        base = lv
    steps = [(L.phi, L.gamma) for L in base] + [(phi, gamma)]
    return InductiveVal._from_steps(mu.p, steps, reuse=base)


def truncation(mu, g: Poly) -> Callable[[Poly], Val]:
    """The truncation mu_g: f -> min over the g-expansion of mu(a_s) + s*mu(g)."""
    vg = mu(g)

    def trunc(f: Poly) -> Val:
        best = INF
        for s, a in enumerate(phi_expansion(f, g)):
            if a.is_zero():
                continue
            v = mu(a) + s * vg if s else mu(a)
            if v < best:
                best = v
        return best

    return trunc


# Newton polygons ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Side:
    slope: Fraction
    start: int
    end: int
    height: Val = field(compare=False, default=0)

    @property
    def length(self) -> int:
        return self.end - self.start

    @property
    def lam(self) -> Fraction:
        """Minus the slope: the augmentation value this side proposes."""
        return -self.slope


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple
    hull: tuple
    sides: tuple

    def one_sided(self, lam) -> bool:
        """True when the polygon is a single side of slope -lam."""
        return len(self.sides) == 1 and self.sides[0].lam == as_rat(lam)

    def principal(self, threshold: Val) -> list[Side]:
        """Sides whose proposed value exceeds ``threshold``."""
        return [s for s in self.sides if threshold is NEG_INF or s.lam > threshold]

    @property
    def first_abscissa(self) -> int:
        return self.hull[0][0] if self.hull else 0


def _lower_hull(pts: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _polygon_from_values(vals: Sequence[Val]) -> NewtonPolygon:
    points = tuple((s, v) for s, v in enumerate(vals))
    finite = [(s, Fraction(v)) for s, v in points if v is not INF]
    hull = _lower_hull(finite)
    sides = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        sides.append(Side(Fraction(y2 - y1) / (x2 - x1), x1, x2, y1))
    return NewtonPolygon(points, tuple(hull), tuple(sides))


def _prefix_of(mu, phi: Poly):
    """The node for which ``phi`` is the key being augmented."""
    if isinstance(mu, _RootNode):
        return mu
    if phi.degree == mu.last_key.degree:
        return _RootNode(mu.p) if mu.depth == 0 else mu.prefix(mu.depth - 1)
    return mu


def _coefficient_values(nu, phi: Poly, f: Poly) -> list[Val]:
    digits = phi_expansion(f, phi)
    if isinstance(nu, _RootNode):
        return [vp(d[0], nu.p) if not d.is_zero() else INF for d in digits]
    return [nu(d) for d in digits]


def newton_polygon(mu, phi: Poly, f: Poly) -> NewtonPolygon:
    """Polygon of the points (s, nu(a_s)) over the phi-expansion of f.

    ``nu`` is ``mu`` itself when ``phi`` is a key of larger degree, and the
    node below ``mu`` when ``phi`` has the degree of the last key of ``mu``.
    """
    nu = _prefix_of(mu, phi)
    return _polygon_from_values(_coefficient_values(nu, phi, f))


def residual_polynomial(mu, phi: Poly, side: Side, f: Poly) -> FqPoly:
    """Residual polynomial of f attached to a side of its phi-polygon.

    Its coefficients are the residues of the side's points normalized by the
    canonical monomials described in the module docstring; the result has a
    nonzero constant term and degree ``side.length / e``.
    """
    nu = _prefix_of(mu, phi)
    node = _augment_unchecked(nu, phi, side.lam)
    _alpha, P = node.graded(f)
    return _strip_y(P)[1]


def key_lifts(mu, phi: Poly, side_or_lam, psi: FqPoly, recenter: bool = True) -> Poly:
    """A key polynomial of [nu; phi, lam] whose residual polynomial is ``psi``.

    ``psi`` must be monic irreducible over the residue field of that node and
    different from ``y``.  The degree of the result is ``deg(phi) * e * deg(psi)``.
    """
    lam = side_or_lam.lam if isinstance(side_or_lam, Side) else as_rat(side_or_lam)
    nu = _prefix_of(mu, phi)
    node = _augment_unchecked(nu, phi, lam)
    return _key_lift(node, psi, recenter)


def _key_lift(node: InductiveVal, psi: FqPoly, recenter: bool = True) -> Poly:
    lv = node._lv
    k = len(lv) - 1
    L = lv[k]
    K = L.ctx
    p = node.p
    if psi.ctx is not K:
        raise InvalidOperand("residual factor lives over the wrong field")
    psi = psi.monic()
    f = psi.degree
    if f < 1 or K.is_zero(psi.coeffs[0]):
        raise InvalidOperand("residual factor must be non-constant and prime to y")
    e, lam = L.e, L.gamma
    step = _canon(lv, k - 1, e * lam)
    top = _canon(lv, k - 1, e * f * lam)
    c_f = _mono_res_in(lv, k - 1, _vec_add(_vec_add((0,) * len(step), step, f), top, -1))
    out = _poly_pow(L.phic, e * f)
    for t in range(f):
        pt = psi.coeffs[t]
        if K.is_zero(pt):
            continue
        a_t = (f - t) * e * lam
        vec = _vec_add(_vec_add(_canon(lv, k - 1, a_t), step, t), top, -1)
        carry = _mono_res_in(lv, k - 1, vec)
        r = K.div(K.mul(c_f, pt), carry)
        if k == 0 and e * f == 1 and recenter:
            # choose the representative in (-p, 0] so the new center is a
            # nonnegative lift of the residual root
            n = as_rat(a_t).numerator
            b = [(r[0] - p) * p**n] if n >= 0 else [Fraction(r[0] - p, p**-n)]
        else:
            b = _lift(lv, k, r, a_t, p)
        out = _add(out, _mul(b, _poly_pow(L.phic, t * e)))
    return Poly(out)


def factor_residual(R: FqPoly) -> list[tuple[FqPoly, int]]:
    return ff_factor(R)
