"""
Tests for the exact coefficient fields.
"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from src.errors import BadParameters, ReducibleModulus, ScaleExceeded
from src.fields import ExtensionField, PrimeField, RationalField, field_from_spec, prime_field_of

F9 = ExtensionField(3, (1, 0, 1))


def test_prime_field_rejects_composite():
    """F_4 is not a prime field."""
    with pytest.raises(BadParameters):
        PrimeField(4)


def test_prime_field_inverse_and_fraction():
    assert PrimeField(7).inv(3) == 5
    assert PrimeField(5).from_fraction(Fraction(1, 2)) == 3
    with pytest.raises(BadParameters):
        PrimeField(5).from_fraction(Fraction(1, 5))


def test_extension_generator_squares_to_minus_one():
    """In F_3[t]/(t^2 + 1) the generator squares to 2 = -1."""
    t = F9.generator
    assert t == (0, 1)
    assert F9.mul(t, t) == (2, 0)
    assert F9.spec_text() == "F_3[t^2 + 1]"
    assert F9.to_str((1, 2)) == "2*t + 1"
    assert F9.degree == 2 and F9.size == 9


def test_extension_rejects_reducible_modulus():
    with pytest.raises(ReducibleModulus):
        ExtensionField(3, (1, 0, 2))


def test_extension_degree_is_capped():
    with pytest.raises(ScaleExceeded):
        ExtensionField(2, (1,) + (0,) * 8 + (1,))


def test_extension_inverse_and_frobenius_root():
    """Every nonzero element has an inverse and every element a unique cube root."""
    for a in F9.elements():
        assert F9.pow(F9.pth_root(a), 3) == a
        if any(a):
            assert F9.mul(a, F9.inv(a)) == F9.one


def test_embedding_and_prime_subfield():
    assert F9.embed(2, PrimeField(3)) == (2, 0)
    assert prime_field_of(F9) == PrimeField(3)
    assert prime_field_of(RationalField()) == RationalField()


def test_field_from_spec():
    assert field_from_spec("Q") == RationalField()
    assert field_from_spec("F_p", p=5) == PrimeField(5)
    assert field_from_spec("F_p[...]", p=3, modulus=(1, 0, 1)) == F9


@given(st.integers(min_value=1, max_value=10 ** 6), st.integers(min_value=1, max_value=10 ** 6))
def test_prime_field_division_inverts_multiplication(a, b):
    field = PrimeField(101)
    x, y = field.from_int(a), field.from_int(b)
    if y != 0:
        assert field.mul(field.div(x, y), y) == x
