from fractions import Fraction
import math

import pytest
from hypothesis import given, strategies as st

from nucembed.exponents import (
    INF,
    Exponent,
    ExponentError,
    conjugate,
    parse_exponent,
    star_exponent,
    tong_exponent,
)

E = Exponent.of

banach = st.one_of(
    st.just(INF),
    st.fractions(min_value=1, max_value=50, max_denominator=12).map(Exponent.of),
)


@pytest.mark.parametrize("r, expected", [(1, INF), (2, E(2)), (Fraction(4, 3), E(4)), ("inf", E(1))])
def test_conjugate_examples(r, expected):
    assert conjugate(E(r)) == expected


@pytest.mark.parametrize(
    "r1, r2, expected",
    [("inf", 1, E(1)), (2, 2, INF), (4, 2, E(4)), (2, 4, INF)],
)
def test_star_examples(r1, r2, expected):
    assert star_exponent(E(r1), E(r2)) == expected


@pytest.mark.parametrize(
    "r1, r2, expected",
    [(1, "inf", INF), ("inf", 1, E(1)), (2, 4, E(Fraction(4, 3))), (3, 3, E(1))],
)
def test_tong_examples(r1, r2, expected):
    assert tong_exponent(E(r1), E(r2)) == expected


def test_parse_and_print():
    assert str(parse_exponent("inf")) == "inf"
    assert str(parse_exponent("4/3")) == "4/3"
    assert str(parse_exponent(" 2 ")) == "2"
    assert parse_exponent("oo").is_inf
    for bad in ("0.5", "1e3", "-2", "0", "x", ""):
        with pytest.raises(ExponentError):
            parse_exponent(bad)


def test_float_input_rules():
    assert E(math.inf).is_inf
    assert E(2.0) == E(2)
    with pytest.raises(ExponentError):
        E(1.5)


def test_quasi_exponents_are_flagged():
    half = E(Fraction(1, 2))
    assert not half.is_banach
    assert half.inv == 2
    with pytest.raises(ExponentError):
        half.require_banach()
    with pytest.raises(ExponentError):
        tong_exponent(half, E(2))


def test_ordering_uses_values():
    assert E(1) < E(2) < INF
    assert sorted([INF, E(3), E(Fraction(4, 3))]) == [E(Fraction(4, 3)), E(3), INF]


@given(banach)
def test_conjugate_is_involution(r):
    assert conjugate(conjugate(r)) == r
    assert r.inv + conjugate(r).inv == 1


@given(banach, banach)
def test_tong_between_one_and_star(r1, r2):
    t = tong_exponent(r1, r2)
    s = star_exponent(r1, r2)
    # 1/t >= 1/r* always, with equality only for {r1, r2} = {1, inf}
    assert t.inv >= s.inv
    assert t.inv <= 1
    if t.inv == s.inv:
        assert {r1, r2} == {E(1), INF}


@given(banach, banach)
def test_tong_branches(r1, r2):
    t = tong_exponent(r1, r2)
    if r2 <= r1:
        assert t == E(1)
    else:
        assert t.inv == 1 - r1.inv + r2.inv
