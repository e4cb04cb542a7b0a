"""Quick invariant suites behind ``valfram selftest``.

Each suite is small enough to run in a few seconds and returns a dict with
``name``, ``passed`` and a short ``detail`` string.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .arith import INF, vp
from .chains import build_chain
from .okutsu import chain_from_frame, distance, frame_from_chain, krasner_constant
from .poly import Poly, resultant
from .residue import FqPoly, ff_factor, prime_field
from .valuation import augment, depth_zero

FIXTURES = [
    (2, "x^2-2"),
    (2, "x^2+x+1"),
    (2, "(x^2+x+1)^2-2"),
    (3, "x^3-3"),
    (3, "x^2-3"),
    (5, "x^4-5"),
]


def _rand_poly(rng: random.Random, deg: int, height: int = 50) -> Poly:
    cs = [rng.randint(-height, height) for _ in range(deg + 1)]
    if cs[-1] == 0:
        cs[-1] = 1
    return Poly(cs)


def _suite_axioms(rng):
    mu = depth_zero(0, Fraction(1, 2), 2)
    mu = augment(mu, Poly([-2, 0, 1]), Fraction(3, 2))
    bad = 0
    for _ in range(1000):
        f, g = _rand_poly(rng, rng.randint(0, 5)), _rand_poly(rng, rng.randint(0, 5))
        if mu(f * g) != mu(f) + mu(g):
            bad += 1
        s = f + g
        if not s.is_zero() and mu(s) < min(mu(f), mu(g)):
            bad += 1
    return bad == 0, f"{bad} violations in 1000 pairs"


def _suite_resultant(rng, parse):
    bad = 0
    for p, text in FIXTURES:
        F = parse(text)
        ch = build_chain(F, p)
        for _ in range(100):
            g = _rand_poly(rng, rng.randint(0, F.degree - 1))
            if g.is_zero():
                continue
            if ch.vF(g) != Fraction(vp(resultant(F, g), p), F.degree):
                bad += 1
    return bad == 0, f"{bad} mismatches over {len(FIXTURES)} fixtures"


def _suite_finite_fields(rng):
    bad = 0
    for p in (2, 3, 5):
        k = prime_field(p)
        for d in (1, 2, 3):
            f = FqPoly.from_ints(k, [0, -1] + [0] * (p**d - 2) + [1])
            fac = ff_factor(f)
            if any(m != 1 or d % g.degree for g, m in fac):
                bad += 1
            if sum(g.degree for g, _ in fac) != p**d:
                bad += 1
    return bad == 0, f"{bad} failures of x^(p^d)-x"


def _suite_frames(rng, parse):
    bad = 0
    for p, text in FIXTURES:
        F = parse(text)
        ch = build_chain(F, p)
        if ch.depth == 0 and F.degree == 1:
            continue
        back = chain_from_frame(frame_from_chain(ch))
        if back.leaf != ch.leaf:
            bad += 1
    return bad == 0, f"{bad} frame round trips failed"


def _suite_ultrametric(rng, parse):
    polys = [parse(t) for t in ("x^2-2", "x^2-6", "x^2+2", "x^2-10", "x^2+x+1", "x^2-18")]
    chains = [build_chain(F, 2) for F in polys]
    bad = 0
    n = len(polys)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) < 3:
                    continue
                d = [distance(polys[a], polys[b], 2, chains[a], chains[b])
                     for a, b in ((i, j), (j, k), (i, k))]
                if d[2] < min(d[0], d[1]):
                    bad += 1
    return bad == 0, f"{bad} ultrametric violations"


def _suite_krasner(rng, parse):
    got = krasner_constant(build_chain(parse("x^2-2"), 2))
    return got == Fraction(3, 2), f"Omega(x^2-2) = {got}"


def _suite_resultant_methods(rng):
    bad = 0
    for _ in range(300):
        f = _rand_poly(rng, rng.randint(1, 6), 20)
        g = _rand_poly(rng, rng.randint(1, 6), 20)
        if resultant(f, g) != resultant(f, g, method="subresultant"):
            bad += 1
    return bad == 0, f"{bad} disagreements"


def run_selftest(seed: int = 0) -> dict:
    from .cli import parse_poly

    rng = random.Random(seed)
    suites = [
        ("valuation-axioms", lambda: _suite_axioms(rng)),
        ("resultant-oracle", lambda: _suite_resultant(rng, parse_poly)),
        ("resultant-methods", lambda: _suite_resultant_methods(rng)),
        ("finite-fields", lambda: _suite_finite_fields(rng)),
        ("frame-round-trip", lambda: _suite_frames(rng, parse_poly)),
        ("ultrametric", lambda: _suite_ultrametric(rng, parse_poly)),
        ("krasner", lambda: _suite_krasner(rng, parse_poly)),
    ]
    out = []
    for name, fn in suites:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed suite, not a crashed CLI
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append({"name": name, "passed": bool(ok), "detail": detail})
    return {"seed": seed, "suites": out}
