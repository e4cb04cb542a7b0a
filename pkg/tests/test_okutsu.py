import random
from fractions import Fraction

import pytest

from valfram.arith import INF, vp
from valfram.chains import UndefinedForLinear, build_chain
from valfram.okutsu import (
    InseparableInput,
    InvalidFrame,
    MeetUndefined,
    OkutsuFrame,
    chain_from_frame,
    distance,
    frame_from_chain,
    is_hos_key,
    krasner_constant,
    meet,
    okutsu_equivalent,
    verify_frame,
    weights,
)
from valfram.poly import Poly, resultant
from valfram.valuation import depth_zero

X = Poly([0, 1])
PHI = Poly([1, 1, 1])
F_DEPTH2 = PHI * PHI - Poly([2])
G_DEPTH2 = PHI * PHI + Poly([2])
SQRT2 = Poly([-2, 0, 1])
SQRT6 = Poly([-6, 0, 1])
SQRT3 = Poly([-3, 0, 1])
H = Fraction(1, 2)


def sample(rng, count, max_deg=6, height=100):
    out = []
    for _ in range(count):
        d = rng.randint(0, max_deg)
        cs = [rng.randint(-height, height) for _ in range(d + 1)]
        if cs[-1] == 0:
            cs[-1] = 1
        out.append(Poly(cs))
    return out


def test_frame_examples():
    fr = frame_from_chain(build_chain(SQRT2, 2))
    assert fr.levels == [[X]] and fr.gammas == [H]
    fr = frame_from_chain(build_chain(F_DEPTH2, 2))
    assert fr.levels == [[X], [PHI]] and fr.gammas == [0, H]
    assert vp(resultant(F_DEPTH2, X), 2) == 0
    fr = frame_from_chain(build_chain(PHI, 2))
    assert fr.levels == [[X]] and fr.gammas == [0]


def test_frame_linear_rejected():
    with pytest.raises(UndefinedForLinear):
        frame_from_chain(build_chain(Poly([-1, 1]), 2))


def test_weights_examples():
    assert weights(frame_from_chain(build_chain(SQRT2, 2))) == [(2, H)]
    assert weights(frame_from_chain(build_chain(F_DEPTH2, 2))) == [(2, 0), (4, Fraction(1, 4))]
    assert weights(frame_from_chain(build_chain(PHI, 2))) == [(2, 0)]


@pytest.mark.parametrize("p,F", [(2, SQRT2), (2, F_DEPTH2), (3, Poly([-3, 0, 0, 1])),
                                 (5, Poly([-5, 0, 0, 0, 1])), (2, PHI)])
def test_round_trip(p, F):
    ch = build_chain(F, p)
    back = chain_from_frame(frame_from_chain(ch))
    assert back.degrees == ch.degrees
    assert back.gammas == ch.gammas
    rng = random.Random(p)
    for g in sample(rng, 500):
        assert back.vF(g) == ch.vF(g)


def test_round_trip_depth_two_node():
    back = chain_from_frame(frame_from_chain(build_chain(F_DEPTH2, 2)))
    assert back.depth == 2
    assert back.keys == [X, PHI]


def test_bad_frames():
    with pytest.raises(InvalidFrame):
        chain_from_frame(OkutsuFrame(F_DEPTH2, 2, [[X], [PHI]], [H, 0]))
    with pytest.raises(InvalidFrame):
        chain_from_frame(OkutsuFrame(SQRT2, 2, [[PHI]], [0]))
    with pytest.raises(InvalidFrame):
        chain_from_frame(OkutsuFrame(SQRT2, 2, [[X]], [1]))


def test_verify_frame_examples():
    ch = build_chain(SQRT2, 2)
    rep = verify_frame(frame_from_chain(ch), ch, grid_height=16, random_draws=300)
    assert rep.passed
    bad = OkutsuFrame(SQRT2, 2, [[Poly([1, 1])]], [0])
    rep = verify_frame(bad, ch, grid_height=4, random_draws=0)
    assert not rep.passed
    assert rep.witness["g"] == "x"
    assert rep.witness["vF"] == "1/2"
    ch2 = build_chain(F_DEPTH2, 2)
    assert verify_frame(frame_from_chain(ch2), ch2, grid_height=3, random_draws=300).passed


def test_distance_examples():
    assert distance(SQRT2, SQRT6, 2) == 1
    assert distance(SQRT2, SQRT2, 2) is INF
    assert distance(Poly([-1, 1]), Poly([-3, 1]), 2) == 1


def test_distance_matches_both_chains():
    polys = [SQRT2, SQRT6, SQRT3, PHI, Poly([2, 0, 1]), Poly([-10, 0, 1])]
    chains = [build_chain(F, 2) for F in polys]
    for F, cF in zip(polys, chains):
        for G, cG in zip(polys, chains):
            if F == G:
                continue
            u = distance(F, G, 2, cF, cG)
            assert u == Fraction(vp(resultant(F, G), 2), F.degree * G.degree)
            assert u == Fraction(cF.vF(G)) / G.degree == Fraction(cG.vF(F)) / F.degree
            assert u == distance(G, F, 2, cG, cF)


def test_meet_examples():
    rng = random.Random(3)
    cF, cG = build_chain(SQRT2, 2), build_chain(SQRT6, 2)
    m = meet(cF, cG)
    assert m.keys[-1] == SQRT2 and m.gammas[-1] == 2
    assert m.wt() == 1
    for h in sample(rng, 300):
        assert m(h) <= min(cF.vF(h), cG.vF(h))
    m = meet(build_chain(Poly([-1, 1]), 2), build_chain(Poly([-3, 1]), 2))
    ref = depth_zero(3, 1, 2)
    assert m.wt() == 1
    assert all(m(h) == ref(h) for h in sample(rng, 300))
    m = meet(cF, build_chain(SQRT3, 2))
    assert m.wt() == 0
    with pytest.raises(MeetUndefined):
        meet(cF, cF)


def test_meet_weight_is_distance():
    rng = random.Random(4)
    polys = [F_DEPTH2, G_DEPTH2, SQRT2, Poly([1, 1, 0, 0, 1]), Poly([-2, 0, 0, 0, 1])]
    chains = [build_chain(F, 2) for F in polys]
    for cF in chains:
        for cG in chains:
            if cF.F == cG.F:
                continue
            m = meet(cF, cG)
            assert m.wt() == distance(cF.F, cG.F, 2, cF, cG)
            for h in sample(rng, 50):
                assert m(h) <= min(cF.vF(h), cG.vF(h))


def test_equivalence_examples():
    assert okutsu_equivalent(SQRT2, SQRT6, 2)
    assert not okutsu_equivalent(SQRT2, SQRT3, 2)
    assert okutsu_equivalent(F_DEPTH2, G_DEPTH2, 2)
    assert okutsu_equivalent(Poly([-1, 1]), Poly([-4, 1]), 2)
    assert not okutsu_equivalent(SQRT2, Poly([-2, 0, 0, 1]), 2)


def test_krasner_examples():
    assert krasner_constant(build_chain(SQRT2, 2)) == Fraction(3, 2)
    assert krasner_constant(build_chain(PHI, 2)) == 0
    with pytest.raises(UndefinedForLinear):
        krasner_constant(build_chain(Poly([-1, 1]), 2))


def test_krasner_inseparable():
    ch = build_chain(SQRT2, 2)
    fake = type(ch).__new__(type(ch))
    fake.__dict__.update(ch.__dict__)
    fake.F = Poly([1, 2, 1])
    with pytest.raises(InseparableInput):
        krasner_constant(fake)


def test_krasner_bounds_last_weight():
    for p, F in [(2, SQRT2), (2, F_DEPTH2), (3, Poly([-3, 0, 0, 1])), (5, Poly([-5, 0, 0, 0, 1]))]:
        ch = build_chain(F, p)
        assert weights(frame_from_chain(ch))[-1][1] <= krasner_constant(ch)


def test_hos_examples():
    ch = build_chain(SQRT2, 2)
    assert is_hos_key(ch, X)
    assert is_hos_key(ch, SQRT2)
    assert not is_hos_key(ch, Poly([0, 1, 1]))


def test_hos_frame_members():
    for p, F in [(2, F_DEPTH2), (3, Poly([-3, 0, 0, 1])), (2, PHI)]:
        ch = build_chain(F, p)
        for phi in frame_from_chain(ch).members:
            assert is_hos_key(ch, phi, samples=1000)


def test_frame_json():
    ch = build_chain(F_DEPTH2, 2)
    js = frame_from_chain(ch).to_json(ch)
    assert js["levels"][1] == {"degree": 2, "phis": ["x^2+x+1"], "gamma": "1/2"}
    assert js["weights"] == [["2", "0/1"], ["4", "1/4"]]
    assert js["okutsu_bound"] == "1/1"
