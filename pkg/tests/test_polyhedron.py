"""
Tests for F-subsets, delta faces and the plane invariants.
"""

import itertools
import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra import LinearForm
from src.errors import BadIndex, EmptyPolyhedron, NegativeCoordinate, WrongDimension
from src.polyhedron import (
    AffineMap,
    delta_face,
    delta_value,
    fraction_text,
    invariants2,
    map_and_rebuild,
    minimal_fsubset,
    project,
)
from tests.conftest import points2

# Vertices of the polyhedron of y^3 + y u1^36 u2^36 + u1^2 u2 (u1+u2)^12 over F_3
MAX_CONTACT_VERTICES = ((Fr(2, 3), Fr(13, 3)), (Fr(14, 3), Fr(1, 3)))


def test_minimal_fsubset_drops_dominated_points():
    delta = minimal_fsubset([(Fr(3, 2), 0), (0, Fr(5, 2)), (1, 1)])
    assert delta.vertices == ((0, Fr(5, 2)), (Fr(3, 2), 0))


def test_minimal_fsubset_keeps_new_vertex():
    delta = minimal_fsubset([(Fr(3, 2), 0), (0, Fr(5, 2)), (Fr(1, 2), Fr(1, 2))])
    assert (Fr(1, 2), Fr(1, 2)) in delta.vertices


def test_minimal_fsubset_errors():
    with pytest.raises(NegativeCoordinate):
        minimal_fsubset([(-1, 2)])
    with pytest.raises(WrongDimension):
        minimal_fsubset([(1, 2), (1,)])
    assert minimal_fsubset([], dim=2).is_empty


def test_minimal_fsubset_in_three_dimensions():
    delta = minimal_fsubset([(1, 0, 0), (0, 1, 0), (0, 0, 1), (Fr(1, 2), Fr(1, 2), Fr(1, 2))])
    assert len(delta.vertices) == 3


def test_invariants_of_max_contact_polyhedron():
    inv = invariants2(minimal_fsubset(MAX_CONTACT_VERTICES))
    assert inv.alpha == Fr(2, 3)
    assert inv.beta == Fr(13, 3)
    assert inv.delta == 5
    assert inv.gamma_plus == Fr(13, 3)
    assert inv.gamma_minus == Fr(1, 3)
    assert inv.epsilon == Fr(1, 3)
    assert inv.zeta == Fr(14, 3)
    assert inv.w_minus == (Fr(14, 3), Fr(1, 3))


def test_invariants_need_dimension_two():
    with pytest.raises(WrongDimension):
        invariants2(minimal_fsubset([(1, 1, 1)]))
    with pytest.raises(EmptyPolyhedron):
        invariants2(minimal_fsubset([], dim=2))


def test_boundary_and_interior():
    delta = minimal_fsubset([(0, Fr(5, 2)), (Fr(3, 2), 0)])
    assert delta.on_boundary((Fr(3, 4), Fr(5, 4)))
    assert delta.interior_plus((1, 1))
    assert delta.interior_plus((0, 3))
    assert delta.on_boundary((0, Fr(5, 2)))
    assert not delta.contains((Fr(1, 2), Fr(1, 2)))


def test_delta_face_and_value():
    delta = minimal_fsubset([(0, 3), (1, 1), (3, 0)])
    level, face = delta_face(delta)
    assert level == 2
    assert face.vertices == ((1, 1),)
    assert face.bounded
    level, face = delta_face(delta, LinearForm((1, 0)))
    assert level == 0 and not face.bounded
    assert delta_value(minimal_fsubset([], dim=2)) == math.inf


def test_point_chart_map():
    assert AffineMap.point_u1(2)((Fr(14, 3), Fr(1, 3))) == (4, Fr(1, 3))
    assert AffineMap.point_u2()((1, 2)) == (1, 2)
    assert AffineMap.curve(2, 0)((3, 1)) == (2, 1)


def test_map_and_rebuild_after_point_chart():
    delta = map_and_rebuild(minimal_fsubset(MAX_CONTACT_VERTICES), AffineMap.point_u1(2))
    assert delta.vertices == ((4, Fr(1, 3)),)


def test_projection():
    delta = minimal_fsubset(MAX_CONTACT_VERTICES)
    assert project(delta, 1).vertices == ((Fr(2, 3),),)
    with pytest.raises(BadIndex):
        project(delta, 3)


def test_fraction_text():
    assert fraction_text(Fr(14, 3)) == "14/3"
    assert fraction_text(5) == "5"
    assert fraction_text(math.inf) == "inf"


@settings(max_examples=50)
@given(points2)
def test_minimal_fsubset_contains_its_points(points):
    delta = minimal_fsubset(points)
    assert all(delta.contains(q) for q in points)
    assert minimal_fsubset(delta.vertices) == delta
    for v in delta.vertices:
        assert delta.on_boundary(v)


def test_membership_with_zero_coordinates_in_three_dimensions():
    delta = minimal_fsubset([(0, 1, 0), (0, 0, 1)])
    assert delta.vertices == ((0, 0, 1), (0, 1, 0))
    assert not delta.contains((1, 0, 0))
    assert delta.contains((0, Fr(1, 2), Fr(1, 2)))
    assert delta.contains((1, 1, 0))
    assert delta.on_boundary((0, 1, 0))
    assert delta.on_boundary((0, Fr(1, 3), Fr(2, 3)))
    assert not delta.on_boundary((5, Fr(1, 3), Fr(2, 3)))
    assert not delta.on_boundary((0, 1, 1))


def test_boundary_of_the_standard_simplex():
    delta = minimal_fsubset([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert delta.on_boundary((Fr(1, 3), Fr(1, 3), Fr(1, 3)))
    assert delta.interior_plus((Fr(1, 2), Fr(1, 2), Fr(1, 2)))
    assert not delta.contains((Fr(1, 4), Fr(1, 4), Fr(1, 4)))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def _has_witness(q, points, grid: int = 12) -> bool:
    """Some lam with denominator `grid` puts sum lam_i p_i below q."""
    for ks in _compositions(grid, len(points)):
        combo = [sum(Fr(k, grid) * p[j] for k, p in zip(ks, points)) for j in range(3)]
        if all(c <= x for c, x in zip(combo, q)):
            return True
    return False


def _has_separator(q, points) -> bool:
    """Some weight w >= 0 with w.q < min over the points of w.p."""
    for w in itertools.product(range(5), repeat=3):
        if any(w) and sum(a * b for a, b in zip(w, q)) < min(sum(a * b for a, b in zip(w, p)) for p in points):
            return True
    return False


coords3 = st.tuples(*[st.integers(min_value=0, max_value=4)] * 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(coords3, min_size=1, max_size=4), st.tuples(*[st.fractions(0, 5, max_denominator=2)] * 3))
def test_three_dimensional_membership_matches_brute_force(points, q):
    delta = minimal_fsubset(points)
    assert all(delta.contains(p) for p in points)
    if _has_witness(q, points):
        assert delta.contains(q)
    elif _has_separator(q, points):
        assert not delta.contains(q)
