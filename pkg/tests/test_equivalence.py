from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from minkowski_arrangements.bodies import cube
from minkowski_arrangements.equivalence import (
    OUTSIDE_HULL,
    OUTSIDE_INTERIOR,
    SlabSystem,
    TranslatePacking,
    packing_body_from_dict,
    packing_to_points,
    points_to_packing,
    verify_hull_exclusion,
    verify_packing,
)
from minkowski_arrangements.errors import (
    ArrangementError,
    Eq1Violated,
    HullContainsOrigin,
    PackingInvalid,
    ZeroWidthSlab,
)
from minkowski_arrangements.extremal_search import cube_arrangement, sample_arrangement
from minkowski_arrangements.lifting import lift_arrangement

from oracles import origin_in_hull, origin_in_interior_of_hull

coords = st.integers(-4, 4).map(lambda k: Fraction(k, 2))


def point_sets(d):
    return st.lists(st.tuples(*[coords] * d), min_size=1, max_size=7, unique=True)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@given(st.sampled_from([2, 3]).flatmap(point_sets))
def test_hull_exclusion_matches_lp(points):
    rep = verify_hull_exclusion(points, OUTSIDE_HULL)
    assert rep.passed == (not origin_in_hull(points))
    if rep.passed:
        c = rep.details["witness"]
        assert all(dot(c, p) >= 1 for p in points)


@given(st.sampled_from([2, 3]).flatmap(point_sets))
def test_interior_exclusion_matches_lp(points):
    rep = verify_hull_exclusion(points, OUTSIDE_INTERIOR)
    assert rep.passed == (not origin_in_interior_of_hull(points))
    if rep.passed:
        c = rep.details["witness"]
        assert any(c) and all(dot(c, p) >= 0 for p in points)


def test_hull_exclusion_examples():
    assert verify_hull_exclusion([(1, 0), (0, 1)]).passed
    assert not verify_hull_exclusion([(1, 0), (-1, 0)]).passed
    # o on the boundary: inside the hull, outside its interior
    assert verify_hull_exclusion([(1, 0), (-1, 0), (0, 1)], OUTSIDE_INTERIOR).passed
    with pytest.raises(ArrangementError):
        verify_hull_exclusion([])
    with pytest.raises(ArrangementError):
        verify_hull_exclusion([(1, 0)], "sideways")


def check_packing_invariants(packing):
    """Recompute the three invariants from the raw slab data."""
    L = packing.body
    ts = packing.translations

    def gauge(x):
        return max(abs(dot(f, x)) / b for f, b in zip(L.functionals, L.half_widths))

    for a in range(len(ts)):
        for b in range(a + 1, len(ts)):
            assert gauge([x - y for x, y in zip(ts[a], ts[b])]) >= 2
        assert gauge(ts[a]) <= packing.lam
    assert not origin_in_hull(ts)


@given(st.sampled_from([cube(2), cube(3)]), st.integers(0, 10**6), st.sampled_from([2, Fraction(5, 2), 3]))
def test_points_to_packing_then_back(K, seed, lam):
    arr = sample_arrangement(K, 7, seed, attempts=200)
    assume(len(arr) >= 2)
    cert = lift_arrangement(arr)
    packing = points_to_packing(cert.point_map(), cert.coefficient_map(), lam)
    assert packing.report.passed
    check_packing_invariants(packing)
    points, functionals, lam_back, report = packing_to_points(packing)
    assert report.passed and lam_back == lam
    # the recovered functionals satisfy the slab inequality with factor lambda / 2
    for (i, j), f in functionals.items():
        gap = abs(f(points[i]) - f(points[j]))
        assert all(abs(f(x)) <= Fraction(lam) / 2 * gap for x in points)


def test_cube_packing_translations():
    cert = lift_arrangement(cube_arrangement(1))
    packing = points_to_packing(cert.point_map(), cert.coefficient_map(), 2)
    assert packing.translations == [(Fraction(-2, 3), Fraction(2, 3)), (0, Fraction(2, 3)), (Fraction(2, 3), Fraction(2, 3))]
    assert packing.report.details["indices"] == [0, 1, 2]


def test_points_to_packing_errors():
    with pytest.raises(HullContainsOrigin):
        points_to_packing([(1, 0), (-1, 0)], {(0, 1): (1, 0)}, 2)
    with pytest.raises(ZeroWidthSlab):
        points_to_packing([(1, 0), (1, 1)], {(0, 1): (1, 0)}, 2)
    with pytest.raises(Eq1Violated) as info:
        points_to_packing([(-1, 1), (1, 1), (5, 1)], {(0, 1): (1, 0)}, 2)
    assert info.value.k == 2
    with pytest.raises(ArrangementError):
        points_to_packing([(1, 0)], {}, Fraction(1, 2))


def test_packing_to_points_on_a_cube_packing():
    packing = TranslatePacking(cube(2), [(2, 0), (2, 2), (2, -2)], 2)
    points, functionals, lam, report = packing_to_points(packing)
    assert report.passed
    assert len(functionals) == 3


def test_overlapping_packing_is_rejected():
    packing = TranslatePacking(cube(2), [(2, 0), (2, 1)], 2)
    rep = verify_packing(packing)
    assert rep.failed_stage() == "non_overlap"
    with pytest.raises(PackingInvalid) as info:
        packing_to_points(packing)
    assert info.value.invariant == "non_overlap"


def test_far_translate_is_rejected():
    rep = verify_packing(TranslatePacking(cube(2), [(2, 0), (5, 0)], 2))
    assert rep.failed_stage() == "meets_scaled_body"


def test_slab_system_gauge_and_json():
    C = SlabSystem([(1, 0), (1, 1)], [2, Fraction(1, 2)])
    assert C.norm((1, 1)) == 4
    assert C.scaled(2).norm((1, 1)) == 2
    back = packing_body_from_dict(C.to_dict())
    assert back.norm((3, -1)) == C.norm((3, -1))
    with pytest.raises(ZeroWidthSlab):
        SlabSystem([(1, 0)], [0])
    packing = TranslatePacking(C, [(4, 0)], 2)
    assert TranslatePacking.from_dict(packing.to_dict()).translations == [(4, 0)]


def test_single_point_packing_has_empty_slab_system():
    packing = points_to_packing({5: (1, 2)}, {}, 2)
    assert packing.report.passed
    assert packing.body.dim == 2 and packing.body.norm((3, 3)) == 0
