import itertools
import random

import pytest

from valfram.arith import InvalidOperand
from valfram.residue import FqPoly, ff_extend, ff_factor, ff_is_irreducible, prime_field

F2 = prime_field(2)
F3 = prime_field(3)
F5 = prime_field(5)
F4 = ff_extend(F2, FqPoly.from_ints(F2, [1, 1, 1]))
OMEGA = F4.gen()


def P(k, ints):
    return FqPoly.from_ints(k, ints)


def has_root(f):
    return any(not any(f(a)) for a in f.ctx.elements())


def monic_polys(k, d):
    elems = list(k.elements())
    for cs in itertools.product(elems, repeat=d):
        yield FqPoly(k, list(cs) + [k.one])


def brute_irreducible(f):
    # degree <= 3: irreducible exactly when there is no root
    assert f.degree <= 3
    return f.degree == 1 or not has_root(f)


def product(fac):
    k = fac[0][0].ctx if fac else F2
    out = FqPoly.one(k)
    for g, m in fac:
        for _ in range(m):
            out = out * g
    return out


def test_factor_examples():
    assert ff_factor(P(F2, [0, 1, 1])) == [(P(F2, [0, 1]), 1), (P(F2, [1, 1]), 1)]
    assert ff_factor(P(F2, [1, 0, 1])) == [(P(F2, [1, 1]), 2)]
    assert ff_factor(P(F3, [1, 0, 1])) == [(P(F3, [1, 0, 1]), 1)]


def test_factor_zero_rejected():
    with pytest.raises(InvalidOperand):
        ff_factor(FqPoly(F2, []))


def test_irreducible_examples():
    assert ff_is_irreducible(P(F2, [1, 1, 1]))
    assert not ff_is_irreducible(P(F4, [1, 1, 1]))
    assert ff_is_irreducible(P(F5, [0, 1]))
    with pytest.raises(InvalidOperand):
        ff_is_irreducible(P(F5, [3]))


def test_f4_roots_of_its_modulus():
    f = P(F4, [1, 1, 1])
    assert has_root(f)
    assert not any(f(OMEGA))


@pytest.mark.parametrize("k", [F2, F3, F4, F5], ids=["q2", "q3", "q4", "q5"])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_product_of_irreducibles(k, d):
    target = FqPoly(k, [k.zero, k.neg(k.one)] + [k.zero] * (k.q**d - 2) + [k.one])
    acc = FqPoly.one(k)
    for e in range(1, d + 1):
        if d % e:
            continue
        for g in monic_polys(k, e):
            irr = brute_irreducible(g)
            assert ff_is_irreducible(g) == irr
            if irr:
                acc = acc * g
    assert acc == target
    fac = ff_factor(target)
    assert all(m == 1 and d % g.degree == 0 for g, m in fac)
    assert product(fac) == target


def test_factor_round_trip_random():
    rng = random.Random(7)
    for k in (F2, F3, F4, F5):
        for _ in range(60):
            d = rng.randint(1, 9)
            cs = [k.random_element(rng) for _ in range(d)] + [k.one]
            f = FqPoly(k, cs)
            c = k.random_element(rng)
            if not any(c):
                c = k.one
            g = f.scale(c)
            fac = ff_factor(g)
            assert product(fac).scale(g.lc) == g
            assert all(h.lc == k.one and ff_is_irreducible(h) for h, _m in fac)
            keys = [h.sort_key() for h, _m in fac]
            assert keys == sorted(keys)


def test_factor_deterministic_across_seeds():
    f = FqPoly.from_ints(F5, [1, 0, 0, 0, 0, 0, 0, 0, 1])
    assert ff_factor(f, seed=1) == ff_factor(f, seed=99)


def test_extend_prime_field_to_f4():
    assert F4.degree == 2
    assert F4.base is F2


def test_extend_degree_one_is_identity():
    k = ff_extend(F3, P(F3, [0, 1]))
    assert k.degree == 1
    assert k.embed(F3.from_int(2)) == F3.from_int(2)


def test_extend_reducible_rejected():
    with pytest.raises(InvalidOperand):
        ff_extend(F2, P(F2, [1, 0, 1]))


def test_extend_f4_to_f16():
    mod = FqPoly(F4, [OMEGA, F4.one, F4.one])
    K = ff_extend(F4, mod)
    assert K.degree == 4
    z = K.root
    # the adjoined root satisfies its step modulus
    val = K.add(K.add(K.mul(z, z), z), K.embed(OMEGA))
    assert not any(val)
    # its Frobenius orbit over F_2 has four elements, so its minimal polynomial has degree 4
    orbit = {z}
    cur = z
    for _ in range(6):
        cur = K.pow(cur, 2)
        orbit.add(cur)
    assert len(orbit) == 4
    # the multiplicative group is cyclic of order 15 and every element is reached
    elems = [a for a in K.elements() if any(a)]
    assert len(elems) == 15
    assert all(K.pow(a, 15) == K.one for a in elems)


def test_embedding_is_a_homomorphism():
    K = ff_extend(F4, FqPoly(F4, [OMEGA, F4.one, F4.one]))
    for a in F4.elements():
        for b in F4.elements():
            assert K.embed(F4.mul(a, b)) == K.mul(K.embed(a), K.embed(b))
            assert K.embed(F4.add(a, b)) == K.add(K.embed(a), K.embed(b))
        assert K.embed_from(a, F4) == K.embed(a)
    for a in F2.elements():
        assert K.embed_from(a, F2) == K.embed(F4.embed(a))


def test_tower_coordinates_round_trip():
    K = ff_extend(F4, FqPoly(F4, [OMEGA, F4.one, F4.one]))
    for a in K.elements():
        assert K.from_tower(K.to_tower(a)) == a


def test_equal_moduli_share_a_field():
    a = ff_extend(F2, FqPoly.from_ints(F2, [1, 1, 1]))
    assert a is F4


def test_field_inverse_and_division():
    for k in (F3, F4, F5):
        for a in k.elements():
            if any(a):
                assert k.mul(a, k.inv(a)) == k.one
                assert k.div(a, a) == k.one
