from fractions import Fraction
import itertools

import pytest
from hypothesis import given, strategies as st

from valfram.arith import (
    INF,
    NEG_INF,
    InvalidOperand,
    PBase,
    format_val,
    parse_val,
    val_add,
    val_compare,
    val_min,
    val_scale,
    vp,
)

nonzero_rats = st.fractions(max_denominator=10**6).filter(lambda q: q != 0)


def test_vp_examples():
    assert vp(12, 2) == 2
    assert vp(0, 5) is INF
    assert vp(Fraction(3, 8), 2) == -3
    assert vp(Fraction(3, 8), PBase(3)) == 1


def test_bad_prime():
    with pytest.raises(InvalidOperand):
        PBase(4)
    with pytest.raises(InvalidOperand):
        vp(3, 1)


def test_value_ops_examples():
    assert val_add(Fraction(1, 2), INF) is INF
    assert val_min(Fraction(1, 2), Fraction(1, 3)) == Fraction(1, 3)
    assert val_compare(NEG_INF, -10**6) == -1
    assert val_compare(INF, 10**9) == 1
    assert val_scale(Fraction(1, 2), 4) == 2
    assert 0 * INF == 0


def test_neg_inf_never_enters_arithmetic():
    with pytest.raises(InvalidOperand):
        val_add(NEG_INF, 1)
    with pytest.raises(InvalidOperand):
        NEG_INF + 1
    with pytest.raises(InvalidOperand):
        INF - INF


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@given(a=nonzero_rats, b=nonzero_rats)
def test_vp_is_a_valuation(p, a, b):
    assert vp(a * b, p) == vp(a, p) + vp(b, p)
    if a + b != 0:
        s = vp(a + b, p)
        assert s >= min(vp(a, p), vp(b, p))
        if vp(a, p) != vp(b, p):
            assert s == min(vp(a, p), vp(b, p))


def test_order_total_and_transitive():
    vals = [NEG_INF, INF] + [Fraction(n, d) for n in range(-4, 5) for d in (1, 2, 3)]
    for a, b in itertools.product(vals, repeat=2):
        assert (a < b) + (a == b) + (a > b) == 1
        assert val_compare(a, b) == -val_compare(b, a)
    for a, b, c in itertools.product(vals[:12], repeat=3):
        if a <= b and b <= c:
            assert a <= c


@pytest.mark.parametrize("v", [INF, NEG_INF, Fraction(0), Fraction(-7, 3), Fraction(5)])
def test_format_round_trip(v):
    s = format_val(v)
    assert parse_val(s) == v
    if v not in (INF, NEG_INF):
        assert "/" in s


def test_zero_serializes_as_fraction():
    assert format_val(0) == "0/1"
