"""
Tests for characteristic polyhedra, nu*, directrices and the delta criteria.
"""

from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings

from src.charpoly import (
    Label,
    boundary_polyhedron,
    char_polyhedron,
    check_strictly_admissible,
    delta_criteria,
    directrix,
    essential_points,
    nu_star,
)
from src.errors import BadIndex, BadParameters, BoundaryInUIdeal, FrameMismatch
from src.polyhedron import delta_value
from tests.conftest import FRAME_F3, FRAME_Q1, FRAME_Q2, label, labels, poly


def test_max_contact_polyhedron(max_contact_label):
    delta = char_polyhedron(max_contact_label)
    assert delta.vertices == ((Fr(2, 3), Fr(13, 3)), (Fr(14, 3), Fr(1, 3)))
    assert delta_value(delta) == 5


def test_max_contact_essential_points_are_collinear(max_contact_label):
    assert essential_points(max_contact_label) == [
        (Fr(2, 3), Fr(13, 3)), (Fr(5, 3), Fr(10, 3)), (Fr(11, 3), Fr(4, 3)), (Fr(14, 3), Fr(1, 3)),
    ]


def test_polyhedron_at_generic_point_of_curve(max_contact_label):
    assert char_polyhedron(max_contact_label, s=1).vertices == ((Fr(2, 3),),)
    with pytest.raises(BadIndex):
        char_polyhedron(max_contact_label, s=3)


def test_boundary_polyhedron_adds_old_components():
    assert boundary_polyhedron(label("y^2", boundary=[("D1", "y + u1^2", True)])).vertices == ((2, 0),)
    assert boundary_polyhedron(label("y^3", boundary=[("D1", "y + u1*u2", True)])).vertices == ((1, 1),)


def test_new_boundary_components_are_ignored():
    assert boundary_polyhedron(label("y^2 + u1^3", boundary=[("E1", "u2", False)])).vertices == ((Fr(3, 2), 0),)


def test_old_boundary_in_u_ideal():
    with pytest.raises(BoundaryInUIdeal):
        boundary_polyhedron(label("y^2 + u1^3", boundary=[("D1", "u1", True)]))


def test_boundary_component_needs_multiplicity_one():
    with pytest.raises(BadParameters):
        label("y^2 + u1^3", boundary=[("D1", "y^2 + u1^2", True)])


def test_label_build_validates_orders():
    with pytest.raises(BadParameters):
        Label.build(FRAME_Q2, [poly("u1")])
    with pytest.raises(BadParameters):
        Label.build(FRAME_Q2, [poly("1 + y")])
    with pytest.raises(FrameMismatch):
        Label.build(FRAME_Q2, [poly("y^2", FRAME_F3)])


def test_nu_star():
    assert nu_star([poly("y^2"), poly("y*u1")]).degrees == (2, 2)
    assert nu_star([poly("y^2"), poly("y^3")]).degrees == (2,)
    assert str(nu_star([poly("y^2")])) == "(2, inf)"


def test_directrix_in_characteristic_three():
    """y^3 + u1^3 = (y + u1)^3 over F_3."""
    assert directrix(poly("y^3 + u1^3", FRAME_F3)).to_list() == ["y + u1"]


def test_directrix_of_product():
    assert directrix(poly("y*u1")).dim == 2


def test_strict_admissibility():
    assert check_strictly_admissible(label("y^2 + u1^3", frame=FRAME_Q1))
    assert not check_strictly_admissible(label("y^2 + u1^2", frame=FRAME_Q1))


def test_delta_criteria():
    low = delta_criteria(label("y^2 + u1", frame=FRAME_Q1))
    assert not (low.delta_ge_1 or low.delta_gt_1 or low.delta_eq_1)
    cusp = delta_criteria(label("y^2 + u1^3", frame=FRAME_Q1))
    assert cusp.delta_ge_1 and cusp.delta_gt_1 and not cusp.delta_eq_1
    node = delta_criteria(label("y^2 + u1^2", frame=FRAME_Q1))
    assert node.delta_eq_1 and node.delta == 1


@settings(max_examples=40)
@given(labels())
def test_criteria_agree_with_polyhedron(lab):
    criteria = delta_criteria(lab)
    delta = delta_value(char_polyhedron(lab))
    assert criteria.delta_ge_1 == (delta >= 1)
    assert criteria.delta_gt_1 == (delta > 1)
