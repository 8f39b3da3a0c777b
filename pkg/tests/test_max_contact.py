"""
Tests for the non-existence check of maximal contact.
"""

from fractions import Fraction

import pytest

from src.charpoly import char_polyhedron
from src.errors import BadParameters
from src.job_parser import parse_polynomial
from src.max_contact import (
    ProbeParameters,
    builtin_candidates,
    classify_candidate,
    evaluate_candidate,
    lower_bound,
    maximal_contact_probe,
    probe_frame,
    probe_label,
    reference_sequence,
)
from src.polyhedron import delta_value

PARAMS = ProbeParameters(3, 2, 1, 4, 36)


def gamma(text: str):
    return parse_polynomial(text, probe_frame(PARAMS))


@pytest.mark.parametrize("values", [
    (4, 2, 2, 5, 80),   # p not prime
    (3, 1, 1, 4, 36),   # a + b != p
    (3, 0, 3, 4, 36),   # a = 0
    (3, 2, 1, 3, 27),   # A <= p
    (3, 2, 1, 6, 54),   # p divides A
    (3, 2, 1, 4, 35),   # N < p^2 A
])
def test_parameter_constraints(values):
    with pytest.raises(BadParameters):
        ProbeParameters(*values)


def test_default_parameters():
    assert ProbeParameters.defaults() == PARAMS
    assert PARAMS.to_dict() == {"p": 3, "a": 2, "b": 1, "A": 4, "N": 36}


def test_example_label_polyhedron():
    delta = char_polyhedron(probe_label(PARAMS))
    assert delta.vertices == ((Fraction(2, 3), Fraction(13, 3)), (Fraction(14, 3), Fraction(1, 3)))
    assert delta_value(delta) == 5


def test_classify_builtin_candidates():
    cases = [classify_candidate(PARAMS, g) for g in builtin_candidates(PARAMS)]
    assert [c.sequence for c in cases] == ["I", "II", "III"]
    assert cases[0].C is None
    assert cases[1].C == 4 and cases[1].c2_nonzero is True
    assert cases[2].C == 4 and cases[2].c2_nonzero is False


def test_classify_other_multiplicity():
    case = classify_candidate(PARAMS, gamma("(u1 + u2)^3*u1^2"))
    assert case.C == 3
    assert case.sequence == "I"


def test_classify_rejects_bad_gamma():
    with pytest.raises(BadParameters):
        classify_candidate(PARAMS, gamma("u1^4"))
    with pytest.raises(BadParameters):
        classify_candidate(PARAMS, gamma("y*u1^5"))


def test_lower_bounds():
    assert lower_bound(PARAMS, "I", 2) == 1
    assert lower_bound(PARAMS, "II", 3) == 2
    assert lower_bound(PARAMS, "III", 3) == 1


def test_reference_sequence_three():
    """Each point chart at u1 lowers delta by (p - b) / p = 2/3."""
    steps = reference_sequence(PARAMS, "III", 3)
    assert [s.q for s in steps] == [0, 1, 2, 3]
    assert [s.delta for s in steps] == [5, Fraction(13, 3), Fraction(11, 3), 3]
    assert steps[1].vertices == ((Fraction(4), Fraction(1, 3)),)
    assert steps[3].to_dict()["delta"] == "3"


def test_reference_sequence_one_dissolves_first_vertex():
    """After the translated chart the vertex (4,4) dissolves in characteristic 3."""
    steps = reference_sequence(PARAMS, "I", 3)
    first = steps[0]
    assert first.vertices == ((4, Fraction(13, 3)), (Fraction(74, 3), Fraction(4, 3)), (35, 0))
    assert first.face == ((4, Fraction(13, 3)),)
    assert first.delta == Fraction(25, 3)
    for q in (1, 2, 3):
        assert steps[q].face == ((4 + Fraction(10 * q, 3), Fraction(13, 3)),)
        assert steps[q].delta == Fraction(25 + 10 * q, 3)


def test_reference_sequence_two():
    steps = reference_sequence(PARAMS, "II", 3)
    for q in (1, 2, 3):
        assert steps[q].vertices == ((Fraction(2, 3), Fraction(13, 3) - Fraction(q, 3)),)
        assert steps[q].delta == 5 - Fraction(q, 3)


def test_reference_sequence_unknown():
    with pytest.raises(BadParameters):
        reference_sequence(PARAMS, "IV")


@pytest.mark.slow
@pytest.mark.parametrize("index, sequence, violation", [(0, "I", 3), (1, "II", 2), (2, "III", 4)])
def test_first_violation(index, sequence, violation):
    report = evaluate_candidate(PARAMS, builtin_candidates(PARAMS)[index])
    assert report.case.sequence == sequence
    assert report.first_violation == violation
    assert report.certified
    assert report.steps[-1].sigma > 1
    assert all(s.sigma <= 1 for s in report.steps[:-1])


def test_truncated_evaluation_is_not_certified():
    report = evaluate_candidate(PARAMS, builtin_candidates(PARAMS)[2], max_q=1)
    assert report.first_violation is None
    assert not report.certified
    assert [s.q for s in report.steps] == [0, 1]


@pytest.mark.slow
def test_maximal_contact_with_defaults():
    report = maximal_contact_probe(3, 2, 1, 4, 36)
    assert report.certified
    data = report.to_dict()
    assert data["polyhedron"]["delta"] == "5"
    assert set(data["sequences"]) == {"I", "II", "III"}
    assert [c["first_violation"] for c in data["candidates"]] == [3, 2, 4]


def test_maximal_contact_rejects_parameters():
    with pytest.raises(BadParameters):
        maximal_contact_probe(3, 2, 1, 4, 10)
