from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minkowski_arrangements.arrangement import (
    Arrangement,
    Homothet,
    is_boundary_sequence,
    is_minkowski,
    is_pairwise_intersecting,
    is_valid_pair,
)
from minkowski_arrangements.bodies import cube
from minkowski_arrangements.errors import ArrangementError, DimensionMismatch
from minkowski_arrangements.numeric import FLOAT, numeric_mode

from oracles import intervals_minkowski, intervals_pairwise_meet

halves = st.integers(-6, 6).map(lambda k: Fraction(k, 2))
radii = st.sampled_from([Fraction(1, 2), Fraction(3, 4), 1, Fraction(3, 2)])
intervals = st.lists(st.tuples(halves, radii), min_size=1, max_size=6)


def line(members):
    return Arrangement(cube(1), [((c,), r) for c, r in members])


@given(intervals)
def test_one_dimensional_predicates_match_interval_arithmetic(members):
    arr = line(members)
    assert is_minkowski(arr).passed == intervals_minkowski(members)
    assert is_pairwise_intersecting(arr).passed == intervals_pairwise_meet(members)
    assert is_pairwise_intersecting(arr, strict=True).passed == intervals_pairwise_meet(members, strict=True)


@given(st.tuples(halves, radii), st.tuples(halves, radii), st.booleans())
def test_valid_pair_is_the_conjunction(a, b, strict):
    arr = line([a, b])
    expected = is_minkowski(arr).passed and is_pairwise_intersecting(arr, strict).passed
    assert is_valid_pair(cube(1), arr[0], arr[1], strict) == expected


def test_violation_names_the_offending_ordered_pair():
    arr = Arrangement(cube(2), [((0, 0), 2), ((1, 0), 1)])
    rep = is_minkowski(arr)
    assert not rep.passed
    assert [(v.i, v.j, v.residual) for v in rep.violations] == [(0, 1, 1)]


def test_touching_members_intersect_only_in_the_closed_sense():
    arr = line([(0, 1), (2, 1)])
    assert is_pairwise_intersecting(arr).passed
    rep = is_pairwise_intersecting(arr, strict=True)
    assert not rep.passed and rep.violations[0].residual == 0


def test_boundary_sequence_hand_example():
    assert is_boundary_sequence(line([(0, 1), (1, 2), (-1, 1)])).passed
    rep = is_boundary_sequence(line([(0, 1), (1, 2), (Fraction(-1, 2), 1)]))
    assert not rep.passed
    assert {(v.i, v.j) for v in rep.violations} == {(0, 2), (1, 2)}


def test_float_mode_tolerates_rounding():
    with numeric_mode(FLOAT, 1e-9):
        arr = Arrangement(cube(1), [((0.0,), 1.0), ((1.0 + 1e-12,), 1.0), ((-1.0,), 1.0)])
        assert is_minkowski(arr).passed
        assert is_boundary_sequence(arr.subset([0, 1])).passed


def test_json_round_trip_and_scaling():
    arr = Arrangement(cube(2), [((0, 0), 1), ((Fraction(3, 2), 1), Fraction(1, 2))])
    back = Arrangement.from_dict(arr.to_dict())
    assert back.centers == arr.centers and back.ratios == arr.ratios
    assert arr.to_dict()["homothets"][1] == {"center": ["3/2", 1], "lambda": "1/2"}
    assert is_minkowski(arr.scaled(3)).passed == is_minkowski(arr).passed


def test_input_validation():
    with pytest.raises(ArrangementError):
        Homothet((0,), 0)
    with pytest.raises(DimensionMismatch):
        Arrangement(cube(2), [((0,), 1)])


def test_empty_and_singleton_arrangements_pass():
    for members in ([], [(0, 1)]):
        arr = line(members)
        assert is_minkowski(arr) and is_pairwise_intersecting(arr) and is_boundary_sequence(arr)
