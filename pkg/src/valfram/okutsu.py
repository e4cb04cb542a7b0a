"""Okutsu frames, the ultrametric u, Okutsu equivalence, Krasner constants and HOS keys."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .arith import INF, NEG_INF, InvalidOperand, PBase, Val, as_rat, format_val, vp
from .chains import (
    DEFAULT_SV_BOUND,
    MLVChain,
    NeedsMorePrecision,
    UndefinedForLinear,
    build_chains,
    okutsu_bound,
    previous_primitive,
)
from .poly import Poly, resultant, taylor_coeffs
from .valuation import (
    InductiveVal,
    InvalidAugmentation,
    RootNode,
    _augment_unchecked,
    _lower_hull,
    augment,
    depth_zero,
)

__all__ = [
    "FrameReport",
    "InvalidFrame",
    "InseparableInput",
    "MeetUndefined",
    "OkutsuFrame",
    "chain_from_frame",
    "distance",
    "frame_from_chain",
    "is_hos_key",
    "krasner_constant",
    "meet",
    "okutsu_equivalent",
    "verify_frame",
    "weights",
]


class InvalidFrame(InvalidOperand):
    pass


class InseparableInput(InvalidOperand):
    pass


class MeetUndefined(InvalidOperand):
    pass


def _prime(base) -> int:
    return base.p if isinstance(base, PBase) else PBase(base).p


def _oracle_vF(F: Poly, g: Poly, p: int) -> Val:
    """v_F(g) from the resultant: v_p(Res(F, g)) / deg(F)."""
    r = resultant(F, g)
    return INF if r == 0 else Fraction(vp(r, p)) / F.degree


# frames ----------------------------------------------------------------------------------


@dataclass
class OkutsuFrame:
    F: Poly
    p: int
    levels: list[list[Poly]]
    gammas: list[Fraction]

    @property
    def degrees(self) -> list[int]:
        return [lev[0].degree for lev in self.levels]

    @property
    def members(self) -> list[Poly]:
        return [phi for lev in self.levels for phi in lev]

    def weighted(self) -> list[Fraction]:
        return [Fraction(g) / m for g, m in zip(self.gammas, self.degrees)]

    def to_json(self, chain: Optional[MLVChain] = None) -> dict:
        out = {
            "poly": str(self.F),
            "levels": [
                {"degree": m, "phis": [str(phi) for phi in lev], "gamma": format_val(g)}
                for lev, m, g in zip(self.levels, self.degrees, self.gammas)
            ],
            "weights": [[str(m), format_val(w)] for m, w in weights(self)],
        }
        if chain is not None:
            out["okutsu_bound"] = format_val(okutsu_bound(chain))
        return out


def frame_from_chain(chain: MLVChain) -> OkutsuFrame:
    """The frame [{phi_0}, ..., {phi_r}] made of the chain keys."""
    if not chain.certified:
        raise NeedsMorePrecision("frame_from_chain needs a certified chain")
    if chain.F.degree < 2:
        raise UndefinedForLinear("frames are defined for degree at least two")
    keys = chain.keys
    gammas = [chain.vF(phi) for phi in keys]
    if gammas != [as_rat(g) for g in chain.gammas]:
        raise AssertionError("chain singular values differ from v_F of the keys")
    return OkutsuFrame(chain.F, chain.p, [[phi] for phi in keys], gammas)


def weights(frame: OkutsuFrame) -> list[tuple[int, Fraction]]:
    """[(m_{l+1}, v_F(phi_l)/m_l)] with m_{r+1} = deg F."""
    ms = frame.degrees + [frame.F.degree]
    return [(ms[i + 1], w) for i, w in enumerate(frame.weighted())]


def _check_frame_shape(frame: OkutsuFrame) -> None:
    ms = frame.degrees
    n = frame.F.degree
    if not frame.levels or any(not lev for lev in frame.levels):
        raise InvalidFrame("frame levels must be nonempty")
    if any(len(lev) != 1 for lev in frame.levels):
        raise InvalidFrame("over Q_p every frame level is a singleton")
    for lev, m in zip(frame.levels, ms):
        if any(not phi.is_monic() or phi.degree != m for phi in lev):
            raise InvalidFrame("level members must be monic of the level degree")
    if ms[0] != 1:
        raise InvalidFrame("the first level must have degree 1")
    full = ms + [n]
    for a, b in zip(full, full[1:]):
        if not a < b or b % a:
            raise InvalidFrame(f"frame degrees {full} must strictly increase by divisibility")
    w = frame.weighted()
    if any(not a < b for a, b in zip(w, w[1:])):
        raise InvalidFrame("weighted values must strictly increase across levels")


def chain_from_frame(frame: OkutsuFrame, base=None) -> MLVChain:
    """Rebuild the MLV chain from a frame, taking v_F values from the resultant."""
    p = frame.p if base is None else _prime(base)
    F = frame.F
    _check_frame_shape(frame)
    gam = [_oracle_vF(F, lev[0], p) for lev in frame.levels]
    if list(gam) != [as_rat(g) for g in frame.gammas]:
        raise InvalidFrame("frame gammas disagree with v_F of the members")
    keys = [lev[0] for lev in frame.levels]
    try:
        mu = depth_zero(-keys[0][0], gam[0], p)
        for phi, g in zip(keys[1:], gam[1:]):
            mu = augment(mu, phi, g)
        leaf = augment(mu, F, INF)
    except InvalidAugmentation as exc:
        raise InvalidFrame(str(exc)) from exc
    if leaf.depth != len(keys):
        raise InvalidFrame("frame does not produce a chain of the expected depth")
    return MLVChain(F, leaf)


# sampling ------------------------------------------------------------------------------------


def monic_grid(max_degree: int, height: int):
    """Monic g with 0 < deg g <= max_degree and |coefficients| <= height.

    Canonical order: by height, then degree, then coefficient tuple.
    """
    out = []
    for d in range(1, max_degree + 1):
        for cs in itertools.product(range(-height, height + 1), repeat=d):
            h = max((abs(c) for c in cs), default=0)
            out.append((h, d, cs))
    out.sort(key=lambda t: (t[0], t[1], tuple(_canon_int(c) for c in t[2])))
    return [Poly(list(cs) + [1]) for _h, _d, cs in out]


def _canon_int(c: int) -> tuple:
    return (abs(c), c < 0)


@dataclass
class FrameReport:
    passed: bool
    checks: dict = field(default_factory=dict)
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": self.checks, "witness": self.witness}


def verify_frame(frame: OkutsuFrame, chain: MLVChain, grid_height: int = 8,
                 random_draws: int = 1000, height: int = 100, seed: int = 0,
                 evaluator=None) -> FrameReport:
    """Sampled check of the fundamental property plus the structural frame properties."""
    checks: dict = {}
    witness = None
    try:
        _check_frame_shape(frame)
        checks["shape"] = True
    except InvalidFrame as exc:
        checks["shape"] = str(exc)
    members_ok = all(build_chains(phi, frame.p).is_irreducible() for phi in frame.members)
    checks["members_irreducible"] = members_ok
    gam_ok = [chain.vF(lev[0]) for lev in frame.levels] == [as_rat(g) for g in frame.gammas]
    checks["gammas"] = gam_ok
    ms = frame.degrees + [frame.F.degree]
    bounds = frame.weighted()
    top = ms[-1] - 1
    grid = monic_grid(top, grid_height)
    rng = random.Random(seed)
    draws = []
    for _ in range(random_draws):
        d = rng.randint(1, top)
        draws.append(Poly([rng.randint(-height, height) for _ in range(d)] + [1]))
    if evaluator is None:
        values = [chain.vF(g) for g in grid + draws]
    else:
        values = evaluator(grid + draws)
    checked = 0
    for g, v in zip(grid + draws, values):
        d = g.degree
        for lvl in range(len(bounds)):
            if d < ms[lvl + 1]:
                checked += 1
                if v is INF or Fraction(v) / d > bounds[lvl]:
                    witness = {
                        "g": str(g),
                        "level": lvl,
                        "vF": format_val(v),
                        "bound": format_val(bounds[lvl]),
                        "phi": str(frame.levels[lvl][0]),
                    }
                break
        if witness is not None:
            break
    checks["fundamental"] = witness is None
    checks["samples"] = checked
    passed = checks["shape"] is True and members_ok and gam_ok and witness is None
    return FrameReport(passed, checks, witness)


# distance, meet, equivalence ------------------------------------------------------------------


def _certified_chain(F: Poly, p: int, sv_bound=DEFAULT_SV_BOUND) -> MLVChain:
    rep = build_chains(F, p, sv_bound)
    if not rep.is_irreducible():
        raise NeedsMorePrecision(f"{F} is not certified irreducible over Q_{p}")
    return rep.chain


def distance(F: Poly, G: Poly, base, chain_F: Optional[MLVChain] = None,
             chain_G: Optional[MLVChain] = None) -> Val:
    """u(F, G) = v_p(Res(F, G)) / (deg F * deg G), cross-checked against both chains."""
    p = _prime(base)
    cF = chain_F or _certified_chain(F, p)
    cG = chain_G or _certified_chain(G, p)
    if F == G:
        return INF
    r = resultant(F, G)
    if r == 0:
        raise AssertionError("distinct irreducible polynomials with a common root")
    u = Fraction(vp(r, p)) / (F.degree * G.degree)
    if Fraction(cF.vF(G)) / G.degree != u or Fraction(cG.vF(F)) / F.degree != u:
        raise AssertionError(f"chain values disagree with the resultant for {F}, {G}")
    return u


def meet(chain_F: MLVChain, chain_G: MLVChain):
    """The greatest common lower node of the two leaves; its weight is u(F, G)."""
    F, G = chain_F.F, chain_G.F
    if F == G:
        raise MeetUndefined("the meet of a leaf with itself is the leaf")
    u = distance(F, G, chain_F.p, chain_F, chain_G)
    nodes = chain_F.nodes
    keys = chain_F.keys + [F]
    i = -1
    for j, mu in enumerate(nodes):
        if mu.wt() <= u:
            i = j
    if i >= 0 and nodes[i].wt() == u:
        return nodes[i]
    phi = keys[i + 1]
    gamma = u * phi.degree
    if i < 0:
        return _augment_unchecked(RootNode(chain_F.p), phi, gamma)
    return augment(nodes[i], phi, gamma)


def okutsu_equivalent(F: Poly, G: Poly, base, chain_F: Optional[MLVChain] = None,
                      chain_G: Optional[MLVChain] = None) -> bool:
    p = _prime(base)
    cF = chain_F or _certified_chain(F, p)
    cG = chain_G or _certified_chain(G, p)
    if F.degree != G.degree:
        return False
    if F.degree == 1:
        return True
    u = distance(F, G, p, cF, cG)
    rho, w = previous_primitive(cF)
    crit2 = u > w
    crit3 = rho(F - G) > rho(F)
    if crit2 != crit3:
        raise AssertionError(f"equivalence criteria disagree for {F}, {G}")
    return crit2


# Krasner constant and HOS keys ------------------------------------------------------------------


def krasner_constant(chain: MLVChain) -> Fraction:
    """Omega(F): the largest value of a difference of two distinct roots of F."""
    F = chain.F
    if F.degree < 2:
        raise UndefinedForLinear("the Krasner constant needs degree at least two")
    if F.gcd(F.derivative()).degree > 0:
        raise InseparableInput(f"{F} is not separable")
    cs = taylor_coeffs(F)
    pts = [(i, Fraction(chain.vF(c))) for i, c in enumerate(cs) if i >= 1]
    hull = _lower_hull(pts)
    (x1, y1), (x2, y2) = hull[0], hull[1]
    return -Fraction(y2 - y1) / (x2 - x1)


def is_hos_key(chain: MLVChain, g: Poly, samples: int = 1000, seed: int = 0,
               height: int = 100) -> bool:
    """Frame-threshold test plus sampled multiplicativity of the truncation of v_F by g."""
    F = chain.F
    if not g.is_monic():
        return False
    if g == F:
        return True
    ms = chain.degrees + [F.degree]
    d = g.degree
    if d not in ms:
        return False
    lvl = ms.index(d)
    if lvl == 0:
        threshold = NEG_INF
    else:
        threshold = Fraction(chain.gammas[lvl - 1]) / ms[lvl - 1]
    vg = chain.vF(g)
    if vg is INF:
        return False
    if not Fraction(vg) / d > threshold:
        return False
    return truncation_is_multiplicative(chain, g, samples, seed, height)


def truncation_is_multiplicative(chain: MLVChain, g: Poly, samples: int = 1000,
                                 seed: int = 0, height: int = 100) -> bool:
    from .kernels import truncation_check

    return truncation_check(chain, g, samples, seed, height)
