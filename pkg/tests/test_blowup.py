"""
Tests for point and curve charts, nearness and near point enumeration.
"""

from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings

from src.blowup import (
    ChartKind,
    ChartSpec,
    NearnessKind,
    apply_chart,
    classify_nearness,
    curve_chart,
    face_polynomials,
    near_point_charts,
    point_chart,
    polyhedron_map,
)
from src.charpoly import char_polyhedron
from src.errors import NonDivisible, ReducibleModulus, WrongDimension
from src.polyhedron import invariants2, map_and_rebuild
from tests.conftest import FRAME_F3, FRAME_Q1, label, labels, poly


def test_cusp_point_chart():
    out = point_chart(label("y^2 + u1^3", frame=FRAME_Q1), ChartSpec.point_u1())
    assert out.generators[0] == poly("y^2 + u1", FRAME_Q1)
    assert char_polyhedron(out).vertices == ((Fr(1, 2),),)
    assert [c.ident for c in out.boundary] == ["E1"]
    assert not out.boundary[0].old


def test_point_chart_undefined_when_order_drops():
    with pytest.raises(NonDivisible):
        point_chart(label("y^2 + u1", frame=FRAME_Q1), ChartSpec.point_u1())


def test_point_chart_matches_polyhedron_map(max_contact_label):
    out = point_chart(max_contact_label, ChartSpec.point_u1())
    assert out.orders == (3,)
    expected = map_and_rebuild(char_polyhedron(max_contact_label), polyhedron_map(ChartSpec.point_u1(), 2))
    assert char_polyhedron(out) == expected
    assert expected.vertices == ((4, Fr(1, 3)),)


def test_exceptional_components_are_numbered():
    out = point_chart(label("y^2 + u1^3", boundary=[("E1", "u2", False)]), ChartSpec.point_u1())
    assert [c.ident for c in out.boundary] == ["E1", "E2"]


def test_curve_chart():
    out = curve_chart(label("y^2 + u1^3*u2"), 0)
    assert out.generators[0] == poly("y^2 + u1*u2")
    assert apply_chart(label("y^2 + u1^3*u2"), ChartSpec.curve(0)) == out


def test_curve_chart_not_permissible():
    with pytest.raises(NonDivisible):
        curve_chart(label("y^2 + u1*u2^5"), 0)


def test_translated_chart():
    lab = label("y^2 + (u1 + u2)^4")
    charts = near_point_charts(lab)
    assert [c.kind for c in charts] == [ChartKind.POINT_U1, ChartKind.POINT_TRANSLATED]
    assert str(charts[1].phi) == "1"
    out = point_chart(lab, charts[1])
    assert out.generators[0] == poly("y^2 + u1^2*u2^4")
    plain = point_chart(lab, charts[0])
    assert char_polyhedron(plain).vertices == ((1, 0),)


def test_nonrational_chart_extends_field():
    lab = label("y^2 + u1^6 + u2^6", frame=FRAME_F3)
    assert invariants2(char_polyhedron(lab)).beta == 3
    out = point_chart(lab, ChartSpec.nonrational(poly("u1^2 + u2^2", FRAME_F3)))
    assert out.field.degree == 2
    assert char_polyhedron(out).vertices == ((2, Fr(3, 2)),)
    assert invariants2(char_polyhedron(out)).beta == Fr(3, 2)


def test_nonrational_chart_rejects_reducible_modulus():
    lab = label("y^2 + u1^6 + u2^6", frame=FRAME_F3)
    with pytest.raises(ReducibleModulus):
        point_chart(lab, ChartSpec.nonrational(poly("u1^2 - u2^2", FRAME_F3)))


def test_face_polynomials():
    lab = label("y^2 + u1^6 + u2^6", frame=FRAME_F3)
    assert face_polynomials(lab) == [poly("u1^6 + u2^6", FRAME_F3)]


def test_point_u2_needs_two_parameters():
    with pytest.raises(WrongDimension):
        polyhedron_map(ChartSpec.point_u2(), 3)


def test_classify_nearness(max_contact_label):
    very = classify_nearness(point_chart(max_contact_label, ChartSpec.point_u1()), True, (3,))
    assert very.kind is NearnessKind.VERY_NEAR and very.delta == Fr(13, 3)
    near = classify_nearness(point_chart(label("y^2 + (u1 + u2)^4"), ChartSpec.point_u1()), True, (2,))
    assert near.kind is NearnessKind.NEAR
    cusp = classify_nearness(point_chart(label("y^2 + u1^3", frame=FRAME_Q1), ChartSpec.point_u1()), False, (2,))
    assert cusp.kind is NearnessKind.NOT_NEAR and not cusp.conclusive
    assert classify_nearness(None, True).to_dict() == {"kind": "not-near", "delta": None, "conclusive": True}


# --- properties -------------------------------------------------------------------

CHARTS = [ChartSpec.point_u1(), ChartSpec.point_u2(), ChartSpec.curve(0)]


def _transform(lab, chart):
    """The chart transform, None when undefined or when an order dropped."""
    try:
        out = apply_chart(lab, chart)
    except NonDivisible:
        return None
    return out if out.orders == lab.orders else None


@pytest.mark.parametrize("chart", CHARTS, ids=lambda c: c.describe())
@settings(max_examples=200, deadline=None)
@given(lab=labels())
def test_chart_transforms_polyhedron_by_its_map(chart, lab):
    out = _transform(lab, chart)
    if out is None:
        return
    expected = map_and_rebuild(char_polyhedron(lab), polyhedron_map(chart, 2))
    assert char_polyhedron(out) == expected


@settings(max_examples=200, deadline=None)
@given(labels())
def test_chart_invariant_identities(lab):
    inv = invariants2(char_polyhedron(lab))
    out = _transform(lab, ChartSpec.point_u1())
    if out is not None:
        after = invariants2(char_polyhedron(out))
        assert (after.alpha, after.beta) == (inv.delta - 1, inv.gamma_minus)
    out = _transform(lab, ChartSpec.point_u2())
    if out is not None:
        after = invariants2(char_polyhedron(out))
        assert (after.alpha, after.beta, after.epsilon) == (inv.alpha, inv.alpha + inv.beta - 1, inv.delta - 1)
    out = _transform(lab, ChartSpec.curve(0))
    if out is not None:
        after = invariants2(char_polyhedron(out))
        assert (after.alpha, after.beta, after.delta) == (inv.alpha - 1, inv.beta, inv.delta - 1)


@pytest.mark.parametrize("chart", CHARTS[:2], ids=lambda c: c.describe())
@settings(max_examples=100, deadline=None)
@given(lab=labels())
def test_nearness_matches_multiplicity(chart, lab):
    """Near exactly when the transform keeps the multiplicity n."""
    try:
        out = point_chart(lab, chart)
    except NonDivisible:
        return
    nearness = classify_nearness(out, True, lab.orders)
    assert nearness.near == (out.generators[0].multiplicity() == lab.orders[0])
