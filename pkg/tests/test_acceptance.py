"""Acceptance criteria 1-8, each reported as one PASS/FAIL line at zero tolerance.

The expected values of the depth-2 fixture (criterion 5) are derived at
import time by the small integer oracles below, before the corpus or any
chain is built.  They use only plain integers and fractions, not the
package.
"""

import random
import sys
import time
from fractions import Fraction
from math import lcm

import numpy as np
import pytest

from conftest import CRITERIA, corpus_and_time
from valfram import (
    Poly,
    build_chain,
    build_chains,
    frame_from_chain,
    is_hos_key,
    krasner_constant,
    okutsu_bound,
    okutsu_equivalent,
    parse_poly,
    ramification_invariants,
    verify_frame,
    weights,
)
from valfram.batch import (
    check_criteria_pairs,
    check_equivalence_block,
    check_frames,
    check_krasner,
    check_resultant_oracle,
    check_triples,
    compare_valuations,
)
from valfram.corpus import hensel_split
from valfram.kernels import chain_evaluator
from valfram.okutsu import OkutsuFrame

PRIMES = (2, 3, 5)


def report(k, ok, detail):
    CRITERIA[k] = (bool(ok), detail)
    sys.__stdout__.write(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'}  {detail}\n")
    sys.__stdout__.flush()


# independent integer oracles -----------------------------------------------------------


def _det(m):
    """Exact determinant by fraction-free elimination."""
    a = [list(map(Fraction, row)) for row in m]
    n, sign = len(a), 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv], sign = a[piv], a[c], -sign
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for k in range(c, n):
                a[r][k] -= f * a[c][k]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i][i]
    return out


def _res(f, g):
    """Sylvester resultant of coefficient lists (low degree first)."""
    m, n = len(f) - 1, len(g) - 1
    if n == 0:
        return Fraction(g[0]) ** m
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(f)) + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(g)) + [0] * (m - 1 - i))
    return _det(rows)


def _v(x, p):
    x = Fraction(x)
    if x == 0:
        return None
    k, a, b = 0, x.numerator, x.denominator
    while a % p == 0:
        a, k = a // p, k + 1
    while b % p == 0:
        b, k = b // p, k - 1
    return k


def _oracle_vF(F, g, p):
    return Fraction(_v(_res(F, g), p), len(F) - 1)


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _rem_mod_p(a, b, p):
    """Remainder of a by monic b over F_p."""
    a = [x % p for x in a]
    while len(a) >= len(b):
        c = a[-1]
        if c:
            shift = len(a) - len(b)
            for i, y in enumerate(b):
                a[shift + i] = (a[shift + i] - c * y) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _irreducible_mod_p(f, p):
    """Trial division by every monic polynomial of degree <= deg/2 over F_p."""
    import itertools

    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for cs in itertools.product(range(p), repeat=k):
            if not _rem_mod_p(f, list(cs) + [1], p):
                return False
    return True


def _schoenemann(F, psi, k, p):
    """F = psi^k + p*r with psi irreducible mod p and r not divisible by (p, psi): F is irreducible."""
    pk = [1]
    for _ in range(k):
        pk = _mul(pk, psi)
    if len(pk) != len(F):
        return False
    diff = [a - b for a, b in zip(F, pk)]
    if any(c % p for c in diff):
        return False
    r = [c // p for c in diff]
    return _irreducible_mod_p(psi, p) and bool(_rem_mod_p(r, psi, p))


def _derive_fixture():
    """Expected invariants of F = x^4+2x^3+3x^2+2x-1 at p = 2 from the integer oracles."""
    p = 2
    F = [-1, 2, 3, 2, 1]
    phi0, phi1 = [0, 1], [1, 1, 1]
    out = {"irreducible": _schoenemann(F, phi1, 2, p)}
    g0, g1 = _oracle_vF(F, phi0, p), _oracle_vF(F, phi1, p)
    out["gammas"] = (g0, g1)
    # phi0, phi1 are best approximants of their degrees: no monic g beats them on a grid
    best1 = max(_oracle_vF(F, [a, 1], p) for a in range(-8, 9))
    best2 = max(_oracle_vF(F, [a, b, 1], p) / 2 for a in range(-8, 9) for b in range(-8, 9))
    best3 = max(_oracle_vF(F, [a, b, c, 1], p) / 3
                for a in range(-3, 4) for b in range(-3, 4) for c in range(-3, 4))
    out["optimal"] = best1 == g0 and best2 == g1 / 2 and best3 <= g1 / 2
    out["weights"] = [(2, g0 / 1), (4, g1 / 2)]
    out["delta0"] = 4 * (g1 / 2)
    # e: denominator of the value group generated by the gammas; f from deg F = e f
    e = 1
    for g in (g0, g1):
        e = lcm(e, g.denominator)
    # F mod 2 is a power of an irreducible quadratic, so f >= 2; with e >= 2 this pins (2, 2)
    out["ef"] = (e, 4 // e)
    out["f_lower"] = len(phi1) - 1
    G = [F[0] + 4] + F[1:]
    u = Fraction(_v(_res(F, G), p), 16)
    out["equiv_F_F4"] = u > g1 / 2 and _schoenemann(G, phi1, 2, p)
    out["u_F_F4"] = u
    return out


FIXTURE = _derive_fixture()
KRASNER_FIXTURES = {
    # v(theta - theta') = v_p(disc) / 2 for a quadratic
    "x^2-2": Fraction(_v(8, 2), 2),
    "x^2+x+1": Fraction(_v(-3, 2), 2),
}


# criteria ------------------------------------------------------------------------------


def test_criterion_1_resultant_oracle(corpus):
    t0 = time.perf_counter()
    _c, build = corpus_and_time()
    results = {p: check_resultant_oracle(corpus[p], p, samples=500, seed=p) for p in PRIMES}
    elapsed = build + time.perf_counter() - t0
    # reference cross-check: the recursive engine on a subset, against the exact resultant
    rng = random.Random(1)
    ref_bad = ref_n = 0
    for p in PRIMES:
        for e in rng.sample(corpus[p], 40):
            ch = e.chain
            for _ in range(5):
                d = rng.randint(0, e.F.degree - 1)
                g = [rng.randint(-50, 50) for _ in range(d)] + [rng.choice([1, -1, 2, 3])]
                want = _oracle_vF(list(map(int, e.F.coeffs)), g, p)
                ref_n += 1
                ref_bad += ch.vF(Poly(g)) != want
    sizes = {p: len(corpus[p]) for p in PRIMES}
    ok = all(r["passed"] for r in results.values()) and ref_bad == 0
    pairs = sum(r["pairs"] for r in results.values())
    pos = sum(r["positive_values"] for r in results.values())
    report(1, ok, f"corpus {sizes}, {pairs} pairs ({pos} with vF>0), "
                  f"{ref_n} engine/Sylvester checks, {elapsed:.0f}s incl. corpus")
    for r in results.values():
        assert r["passed"], r["examples"]
    assert ref_bad == 0


def test_criterion_2_round_trip(corpus, engine_results):
    from valfram.corpus import CorpusEntry

    counts = {p: r["failure_counts"]["round_trip"] for p, r in engine_results.items()}
    n = sum(r["entries"] for r in engine_results.values())
    ok = not any(counts.values())
    sampled = 0
    for p in PRIMES:
        E = [e for e in corpus[p] if e.F.degree >= 2]
        pos = {id(e): i for i, e in enumerate(corpus[p])}
        rebuilt = engine_results[p]["rebuilt"]
        back = [CorpusEntry(e.F, p, *rebuilt[pos[id(e)]]) for e in E]
        r = compare_valuations(E, back, p, samples=500, seed=p)
        sampled += r["pairs"]
        ok &= r["passed"]
        assert r["passed"], r["examples"]
    report(2, ok, f"{n} chains round-tripped through frames (failures {counts}); "
                  f"{sampled} sampled vF comparisons")
    assert ok, {p: r["failures"]["round_trip"] for p, r in engine_results.items()}


def _deg4_block(entries, target=3000, seed=0):
    """A stratified degree-4 block: every entry whose (c3, c2) lies in a random set of pairs."""
    rng = random.Random(seed)
    by_top: dict = {}
    for i, e in enumerate(entries):
        if e.F.degree == 4:
            by_top.setdefault((e.F[3], e.F[2]), []).append(i)
    tops = sorted(by_top)
    rng.shuffle(tops)
    block = []
    for t in tops:
        if len(block) + len(by_top[t]) > target:
            continue
        block += by_top[t]
    return sorted(block)


def test_criterion_3_equivalence(corpus):
    lines, ok = [], True
    rng = np.random.default_rng(3)
    spot = 0
    for p in PRIMES:
        E = corpus[p]
        blocks = {n: [i for i, e in enumerate(E) if e.F.degree == n] for n in (1, 2, 3)}
        blocks[4] = _deg4_block(E, seed=p)
        npairs = neq = 0
        for n, idx in blocks.items():
            r = check_equivalence_block(E, p, idx)
            ok &= r["passed"]
            npairs += r["pairs"]
            neq += r["equivalent_pairs"]
            assert r["passed"], (p, n, r)
        # uniform equal-degree pairs across the whole corpus
        degs = np.array([e.F.degree for e in E])
        four = np.nonzero(degs == 4)[0]
        ii = rng.choice(four, 100_000)
        jj = rng.choice(four, 100_000)
        keep = ii != jj
        r = check_criteria_pairs(E, p, ii[keep], jj[keep])
        ok &= r["passed"]
        assert r["passed"], r
        # engine spot check, which asserts both criteria internally
        sample = rng.choice(blocks[4], (150, 2))
        for a, b in sample:
            if a != b:
                okutsu_equivalent(E[a].F, E[b].F, p, E[a].chain, E[b].chain)
                spot += 1
        lines.append(f"p={p}: {npairs} block pairs ({neq} equivalent) + {r['pairs']} random")
    report(3, ok, "; ".join(lines) + f"; {spot} engine pairs")


def test_criterion_4_ultrametric(corpus):
    ok, parts = True, []
    for p in PRIMES:
        r = check_triples(corpus[p], p, count=100_000, seed=p)
        ok &= r["passed"]
        parts.append(f"p={p}: {r['triples']} triples, {r['pairs']} pairs, "
                     f"{r['distinct_u_values']} distinct u")
        assert r["passed"], r
    report(4, ok, "; ".join(parts))


def test_criterion_5_depth_two_fixture():
    exp = FIXTURE
    assert exp["irreducible"] and exp["optimal"]
    assert exp["gammas"] == (0, Fraction(1, 2))
    assert exp["ef"] == (2, 2) and exp["f_lower"] == 2
    F = parse_poly("x^4+2*x^3+3*x^2+2*x-1")
    assert F == parse_poly("(x^2+x+1)^2-2")
    ch = build_chain(F, 2)
    frame = frame_from_chain(ch)
    got = {
        "depth": ch.depth,
        "keys": [str(k) for k in ch.keys],
        "gammas": tuple(ch.gammas),
        "ef": ramification_invariants(ch),
        "weights": [(m, w) for m, w in weights(frame)],
        "delta0": okutsu_bound(ch),
        "equiv": okutsu_equivalent(F, F + 4, 2),
    }
    want = {
        "depth": 2,
        "keys": ["x", "x^2+x+1"],
        "gammas": exp["gammas"],
        "ef": exp["ef"],
        "weights": exp["weights"],
        "delta0": exp["delta0"],
        "equiv": exp["equiv_F_F4"],
    }
    ok = got == want and exp["equiv_F_F4"] is True and exp["delta0"] == 1
    report(5, ok, f"depth {got['depth']}, keys {got['keys']}, gammas "
                  f"{[str(g) for g in got['gammas']]}, (e,f)={got['ef']}, "
                  f"weights {[(m, str(w)) for m, w in got['weights']]}, delta0={got['delta0']}, "
                  f"F~F+4 {got['equiv']} (u={exp['u_F_F4']})")
    assert got == want


def test_criterion_6_fundamental_property(corpus):
    ok, parts = True, []
    api_runs = 0
    for p in PRIMES:
        E = corpus[p]
        r = check_frames(E, p, grid_height=8, random_draws=1000, seed=p)
        ok &= r["passed"]
        assert r["passed"], r
        # the public verify_frame on one representative per signature
        reps: dict = {}
        for e in E:
            if e.F.degree >= 2:
                reps.setdefault(e.signature, e)
        for e in reps.values():
            ch = e.chain
            rep = verify_frame(frame_from_chain(ch), ch, grid_height=8, seed=p,
                               evaluator=chain_evaluator(ch).values)
            api_runs += 1
            ok &= rep.passed
            assert rep.passed, (str(e.F), rep.witness)
        parts.append(f"p={p}: {r['signatures']} signatures")
    # planted bad frame [{x+1}] for x^2-2
    F = parse_poly("x^2-2")
    ch = build_chain(F, 2)
    bad = OkutsuFrame(F, 2, [[parse_poly("x+1")]], [_oracle_vF([-2, 0, 1], [1, 1], 2)])
    rep = verify_frame(bad, ch)
    w = rep.witness or {}
    g = parse_poly(w.get("g", "0")) if w else None
    witness_ok = (not rep.passed and g is not None and g.degree == 1
                  and _oracle_vF([-2, 0, 1], list(map(int, g.coeffs)), 2) > Fraction(w["bound"]))
    ok &= witness_ok
    report(6, ok, "; ".join(parts) + f"; {api_runs} verify_frame runs; bad frame witness "
                  f"g={w.get('g')} vF={w.get('vF')} > bound {w.get('bound')}")
    assert witness_ok and w["g"] == "x"


def test_criterion_7_krasner(corpus, engine_results):
    ok, checked = True, 0
    for p in PRIMES:
        r = check_krasner(corpus[p], p)
        ok &= r["passed"]
        checked += r["checked"]
        assert r["passed"], r["examples"]
        eng = engine_results[p]["omegas"]
        same = all(eng[i] == om for i, om in r["omegas"].items()) and set(eng) == set(r["omegas"])
        ok &= same
        assert same
    fx = {s: krasner_constant(build_chain(parse_poly(s), 2)) for s in KRASNER_FIXTURES}
    fixtures_ok = fx == KRASNER_FIXTURES and fx["x^2-2"] == Fraction(3, 2) and fx["x^2+x+1"] == 0
    ok &= fixtures_ok
    report(7, ok, f"{checked} separable F with w_r <= Omega (batched and engine agree); "
                  f"Omega(x^2-2)={fx['x^2-2']}, Omega(x^2+x+1)={fx['x^2+x+1']}")
    assert fixtures_ok


def test_criterion_8_structure(corpus, engine_results):
    ok = True
    counts = {}
    for p, r in engine_results.items():
        fc = r["failure_counts"]
        for k in ("ef", "divide", "weights", "oracle", "krasner"):
            counts[k] = counts.get(k, 0) + fc[k]
    ok &= not any(counts.values())
    # every frame member is a HOS key: once per (signature, member)
    hos = 0
    for p in PRIMES:
        reps: dict = {}
        for e in corpus[p]:
            if e.F.degree >= 2:
                reps.setdefault(e.signature, e)
        for e in reps.values():
            ch = e.chain
            for phi in frame_from_chain(ch).members:
                hos += 1
                good = is_hos_key(ch, phi, seed=p)
                ok &= good
                assert good, (str(e.F), str(phi))
    # certified branches of rejected candidates: e*f per leaf, degrees add up
    rng = random.Random(8)
    branches = 0
    for p in PRIMES:
        from valfram.corpus import enumerate_monic

        cands = [F for F in enumerate_monic(4, 9) if F.degree >= 2]
        for F in rng.sample(cands, 150):
            rep = build_chains(F, p)
            # a branch degree already counts multiplicity
            total = sum(b.degree for b in rep.branches)
            ok &= total == F.degree
            assert total == F.degree
            for b in rep.branches:
                if b.kind == "leaf" and b.certified:
                    e, f = ramification_invariants(b.chain())
                    branches += 1
                    ok &= e * f == b.degree
                    assert e * f == b.degree
            if hensel_split(F, p):
                assert not rep.is_irreducible()
    report(8, ok, f"divisibility/e*f/weights on every corpus chain (failures {counts}); "
                  f"{hos} HOS members; {branches} leaf branches of other candidates")
    assert not any(counts.values()), {p: r["failures"] for p, r in engine_results.items()}


if __name__ == "__main__":  # pragma: no cover
    sys.exit(pytest.main([__file__, "-q"]))
