from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minkowski_arrangements.numeric import (
    FLOAT,
    NumericMode,
    div,
    get_mode,
    gt_root_of_two,
    lt_root_of_two,
    numeric_mode,
    root_of_two_lower,
    serialize,
    to_scalar,
)

rationals = st.fractions(min_value=Fraction(1, 100), max_value=3, max_denominator=1000)


def test_default_mode_is_rational():
    assert get_mode().exact
    assert get_mode().eps == 0


def test_string_parsing_is_exact():
    assert to_scalar("3/4") == Fraction(3, 4)
    assert to_scalar("0.1") == Fraction(1, 10)
    assert isinstance(to_scalar("4/2"), int)


def test_float_enters_rational_mode_by_binary_value():
    assert to_scalar(0.1) == Fraction(0.1)
    assert to_scalar(0.1) != Fraction(1, 10)


def test_float_mode_coerces_to_float():
    with numeric_mode(FLOAT, 1e-6) as mode:
        assert isinstance(to_scalar("1/3"), float)
        assert mode.le(1.0 + 5e-7, 1.0)
        assert not mode.lt(1.0 - 5e-7, 1.0)
    assert get_mode().exact


def test_rejects_bad_modes():
    with pytest.raises(ValueError):
        NumericMode("decimal")
    with pytest.raises(ValueError):
        NumericMode(FLOAT, -1)
    with pytest.raises(TypeError):
        to_scalar(True)


def test_div_stays_exact_on_ints():
    assert div(1, 3) == Fraction(1, 3)
    assert div(6, 3) == 2 and isinstance(div(6, 3), int)


@given(st.fractions(max_denominator=10**6))
def test_serialize_round_trip(q):
    assert to_scalar(serialize(q)) == q


def test_serialize_infinity_and_ints():
    assert serialize(float("inf")) == "inf"
    assert serialize(7) == 7
    assert serialize([Fraction(1, 2), 3]) == ["1/2", 3]


@pytest.mark.parametrize("N", range(2, 13))
def test_root_of_two_lower_is_a_tight_under_approximation(N):
    s = root_of_two_lower(N)
    assert s**N <= 2
    assert 2 ** (1 / N) - float(s) < 1e-14


@given(rationals, st.integers(2, 12))
def test_root_comparisons_agree_with_powers(q, N):
    assert lt_root_of_two(q, N) == (q**N < 2)
    assert gt_root_of_two(q, N) == (q**N > 2)
