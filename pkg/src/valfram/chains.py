"""MacLane chains of monic polynomials over Q_p.

:func:`build_chains` walks the tree of tangent directions from the root,
splitting the input along Newton polygon sides and residual factors, until
every branch is either a certified leaf, a certified factor known to a
chosen precision, or an uncertified approximant at the precision bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional

from .arith import INF, NEG_INF, InvalidOperand, PBase, Val, as_rat, format_val, vp
from .poly import Poly, X, phi_expansion
from .residue import FqPoly, ff_factor
from .valuation import (
    InductiveVal,
    RootNode,
    _augment_unchecked,
    _coefficient_values,
    _key_lift,
    _polygon_from_values,
    _prefix_of,
    _strip_y,
)

__all__ = [
    "Branch",
    "ExtensionsReport",
    "MLVChain",
    "NeedsMorePrecision",
    "build_chain",
    "build_chains",
    "depth",
    "okutsu_bound",
    "previous_primitive",
    "ramification_invariants",
    "vF",
]

DEFAULT_SV_BOUND = 20


class NeedsMorePrecision(InvalidOperand):
    """A certified branch was required but only an approximant is available."""


class UndefinedForLinear(InvalidOperand):
    """The invariant is only defined for polynomials of degree at least two."""


def _prime(base) -> int:
    return base.p if isinstance(base, PBase) else PBase(base).p


# chains --------------------------------------------------------------------------------


class MLVChain:
    """The chain mu_0 < ... < mu_r < v_F of a Q_p-irreducible polynomial F."""

    def __init__(self, F: Poly, leaf: InductiveVal, certified: bool = True) -> None:
        if not leaf.is_leaf() or leaf.support != F:
            raise InvalidOperand("chain leaf must have support F")
        self.F = F
        self.p = leaf.p
        self.leaf = leaf
        self.certified = certified
        self._residual_degrees: Optional[list[int]] = None

    @property
    def prime(self) -> PBase:
        return PBase(self.p)

    @property
    def depth(self) -> int:
        return self.leaf.depth

    @property
    def nodes(self) -> list[InductiveVal]:
        """Inner nodes mu_0, ..., mu_r."""
        return [self.leaf.prefix(i) for i in range(self.leaf.depth)]

    @property
    def keys(self) -> list[Poly]:
        return self.leaf.keys[:-1]

    @property
    def gammas(self) -> list[Val]:
        return self.leaf.gammas[:-1]

    @property
    def degrees(self) -> list[int]:
        return [k.degree for k in self.keys]

    @property
    def weights(self) -> list[Fraction]:
        return [Fraction(g) / m for g, m in zip(self.gammas, self.degrees)]

    @property
    def e_list(self) -> list[int]:
        return [self.leaf.level_data(i)["e"] for i in range(self.depth)]

    @property
    def residual_degrees(self) -> list[int]:
        """Degree of the residual polynomial of the next key at each inner node."""
        if self._residual_degrees is None:
            out = []
            for i in range(self.depth):
                _a, P = self.leaf.prefix(i).graded(self.leaf.keys[i + 1])
                out.append(_strip_y(P)[1].degree)
            self._residual_degrees = out
        return self._residual_degrees

    def vF(self, g: Poly) -> Val:
        return self.leaf(g)

    __call__ = vF

    def to_json(self) -> dict:
        nodes = []
        for phi, gam, m, f in zip(self.keys, self.gammas, self.degrees, self.residual_degrees):
            nodes.append({
                "phi": str(phi),
                "gamma": format_val(gam),
                "degree": m,
                "weight": format_val(Fraction(gam) / m),
                "residual_degree": f,
            })
        e, f = ramification_invariants(self)
        return {
            "prime": self.p,
            "poly": str(self.F),
            "certified": self.certified,
            "depth": self.depth,
            "nodes": nodes,
            "e": e,
            "f": f,
        }

    def __repr__(self) -> str:
        return f"MLVChain(p={self.p}, F={self.F}, leaf={self.leaf})"


# branches --------------------------------------------------------------------------------


@dataclass
class Branch:
    """One extension of v_p to Q[x]/(F).

    ``kind`` is ``"leaf"`` when the branch is the exact leaf of an irreducible
    factor (``factor``), ``"factor"`` when a Q_p-irreducible factor is
    certified but only known through the approximant node ``node`` with key
    ``approx``, and ``"approximant"`` when the precision bound was reached
    before certification.  ``degree`` counts multiplicity: an exact repeated
    factor of degree m and multiplicity j gives a branch of degree j*m.
    """

    kind: str
    degree: int
    certified: bool
    node: Optional[InductiveVal] = None
    approx: Optional[Poly] = None
    leaf: Optional[InductiveVal] = None
    multiplicity: int = 1
    _F: Optional[Poly] = field(default=None, repr=False)
    _psi: Optional[FqPoly] = field(default=None, repr=False)

    @property
    def exact(self) -> bool:
        return self.kind == "leaf"

    @property
    def factor(self) -> Optional[Poly]:
        return self.leaf.support if self.leaf is not None else None

    def chain(self) -> MLVChain:
        if self.kind != "leaf" or not self.certified:
            raise NeedsMorePrecision("branch is not a certified exact leaf")
        return MLVChain(self.leaf.support, self.leaf)

    def value(self, g: Poly, max_refinements: int = 400) -> Val:
        """v_G(g) for the factor G carried by this branch."""
        if self.kind == "leaf":
            return self.leaf(g)
        if self.kind != "factor":
            raise NeedsMorePrecision("uncertified approximant has no exact values")
        node, phi, psi = self.node, self.approx, self._psi
        for _ in range(max_refinements):
            if g.is_zero():
                return INF
            v, P = node.graded(g)
            if not _divides(psi, P):
                return v
            step = _refine_factor(self._F, node, psi, phi)
            if step[0] == "leaf":
                self.kind, self.leaf = "leaf", step[1]
                return self.leaf(g)
            node, phi, psi = step[1], step[2], step[3]
            self.node, self.approx, self._psi = node, phi, psi
        raise NeedsMorePrecision("branch value did not stabilize")


def _divides(psi: FqPoly, P: FqPoly) -> bool:
    return (P % psi).is_zero()


@dataclass
class ExtensionsReport:
    input: Poly
    p: int
    branches: list[Branch]
    split: bool = False

    @property
    def local_degrees(self) -> list[int]:
        return [b.degree for b in self.branches]

    @property
    def all_certified(self) -> bool:
        return all(b.certified for b in self.branches)

    def is_irreducible(self) -> bool:
        return (
            len(self.branches) == 1
            and self.branches[0].kind == "leaf"
            and self.branches[0].certified
            and self.branches[0].degree == self.input.degree
        )

    @property
    def chain(self) -> MLVChain:
        if not self.is_irreducible():
            raise NeedsMorePrecision(f"{self.input} is not certified irreducible over Q_{self.p}")
        return self.branches[0].chain()


# exploration -------------------------------------------------------------------------------


class _Split(Exception):
    pass


def _refine_factor(F: Poly, mu: InductiveVal, psi: FqPoly, phi: Poly):
    """One refinement step of a certified simple factor.

    ``mu`` is a node where the residual polynomial of F has the simple factor
    ``psi`` and ``phi`` is the key lift of ``psi``.  Returns ``("leaf", leaf)``
    when ``phi`` divides F exactly, else ``("node", mu', phi', psi')``.
    """
    nu = _prefix_of(mu, phi)
    thr = mu(phi)
    vals = _coefficient_values(nu, phi, F)
    if vals[0] is INF:
        return ("leaf", _augment_unchecked(nu, phi, INF))
    sides = [s for s in _polygon_from_values(vals).sides if s.lam > thr]
    if len(sides) != 1 or sides[0].start != 0 or sides[0].end != 1:
        raise AssertionError("refinement lost the simple factor")  # pragma: no cover
    node = _augment_unchecked(nu, phi, sides[0].lam)
    _a, P = node.graded(F)
    R = _strip_y(P)[1].monic()
    return ("node", node, _key_lift(node, R), R)


def _explore(F: Poly, p: int, sv_bound, stop_on_split: bool) -> list[Branch]:
    n = F.degree
    out: list[Branch] = []
    stack = [(RootNode(p), X, NEG_INF)]
    while stack:
        nu, phi, thr = stack.pop()
        m = phi.degree
        vals = _coefficient_values(nu, phi, F)
        j = 0
        while vals[j] is INF:
            j += 1
        poly = _polygon_from_values(vals)
        sides = poly.principal(thr)
        forks = (1 if j else 0) + len(sides)
        if stop_on_split and forks > 1:
            raise _Split
        if j:
            leaf = _augment_unchecked(nu, phi, INF)
            whole = j == 1 and m == n
            if stop_on_split and not whole:
                raise _Split
            out.append(Branch("leaf", j * m, j == 1, leaf=leaf, multiplicity=j, _F=F))
        for side in sides:
            mu = _augment_unchecked(nu, phi, side.lam)
            e = mu._lv[-1].e
            _a, P = mu.graded(F)
            R = _strip_y(P)[1]
            factors = ff_factor(R)
            if stop_on_split and len(factors) > 1:
                raise _Split
            for psi, a in factors:
                mp = m * e * psi.degree
                if a == 1 and mp == n:
                    leaf = _augment_unchecked(mu if mp > m else nu, F, INF)
                    out.append(Branch("leaf", n, True, leaf=leaf, _F=F))
                    continue
                if a == 1:
                    if stop_on_split:
                        raise _Split
                    out.append(_certify_factor(F, mu, psi, mp, sv_bound))
                    continue
                if side.lam >= sv_bound:
                    out.append(Branch("approximant", a * mp, False, node=mu,
                                      approx=_key_lift(mu, psi), _F=F))
                    continue
                phi2 = _key_lift(mu, psi)
                nu2 = mu if mp > m else nu
                stack.append((nu2, phi2, mu(phi2)))
    return out


def _certify_factor(F: Poly, mu: InductiveVal, psi: FqPoly, degree: int, sv_bound) -> Branch:
    phi = _key_lift(mu, psi)
    node, cur_psi = mu, psi
    while True:
        step = _refine_factor(F, node, cur_psi, phi)
        if step[0] == "leaf":
            return Branch("leaf", degree, True, leaf=step[1], _F=F)
        node, phi, cur_psi = step[1], step[2], step[3]
        if node.sv() >= sv_bound:
            return Branch("factor", degree, True, node=node, approx=phi, _F=F, _psi=cur_psi)


def build_chains(F: Poly, base, sv_bound: Val = DEFAULT_SV_BOUND,
                 stop_on_split: bool = False) -> ExtensionsReport:
    """Enumerate the extensions of v_p to Q[x]/(F).

    With ``stop_on_split`` the search stops at the first sign that F is not
    irreducible over Q_p; the returned report then has ``split=True`` and no
    branches.
    """
    p = _prime(base)
    if not isinstance(F, Poly) or F.is_zero() or F.degree < 1 or not F.is_monic():
        raise InvalidOperand("build_chains needs a monic polynomial of positive degree")
    if not F.is_integral():
        raise InvalidOperand("build_chains needs integral coefficients")
    try:
        branches = _explore(F, p, sv_bound, stop_on_split)
    except _Split:
        return ExtensionsReport(F, p, [], split=True)
    order = {"leaf": 0, "factor": 1, "approximant": 2}
    branches.sort(key=lambda b: (order[b.kind], b.degree))
    return ExtensionsReport(F, p, branches)


def build_chain(F: Poly, base, sv_bound: Val = DEFAULT_SV_BOUND) -> MLVChain:
    """The chain of F, which must be certified irreducible over Q_p."""
    return build_chains(F, base, sv_bound).chain


# chain invariants ---------------------------------------------------------------------------


def _require_certified(chain: MLVChain) -> None:
    if not chain.certified:
        raise NeedsMorePrecision("chain is not certified")


def vF(chain: MLVChain, g: Poly) -> Val:
    """v_F(g) = v(g(theta)) for a root theta of F."""
    _require_certified(chain)
    return chain.leaf(g)


def ramification_invariants(chain: MLVChain) -> tuple[int, int]:
    """(e, f) of Q_p(theta)/Q_p read off the chain."""
    _require_certified(chain)
    e = 1
    for g in chain.gammas:
        e = lcm(e, as_rat(g).denominator)
    if chain.depth == 0:
        return e, 1
    last = chain.nodes[-1]
    _a, P = last.graded(chain.F)
    f = last.residue_field.degree * _strip_y(P)[1].degree
    return e, f


def previous_primitive(chain: MLVChain):
    """(rho_F, wt(rho_F)): the last inner node, or the root for linear F."""
    if chain.depth == 0:
        root = RootNode(chain.p)
        return root, NEG_INF
    rho = chain.leaf.prefix(chain.depth - 1)
    return rho, rho.wt()


def okutsu_bound(chain: MLVChain) -> Val:
    """delta_0(F) = rho_F(F), cross-checked against deg(F) * wt(rho_F)."""
    _require_certified(chain)
    if chain.F.degree < 2:
        raise UndefinedForLinear("the Okutsu bound is undefined for linear F")
    rho, w = previous_primitive(chain)
    d = rho(chain.F)
    if d != chain.F.degree * w:
        raise AssertionError("Okutsu bound disagrees with deg(F) * wt(rho_F)")
    return d


def depth(chain: MLVChain) -> int:
    return chain.depth
