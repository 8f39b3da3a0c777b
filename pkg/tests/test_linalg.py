"""
Tests for sparse echelon forms, null spaces and affine systems.
"""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from src.fields import ExtensionField, PrimeField, RationalField
from src.linalg import Echelon, nullspace, solve_affine

QQ = RationalField()
F9 = ExtensionField(3, (1, 0, 1))


def test_nullspace_of_one_equation():
    """x0 + x1 = 0 has the kernel spanned by (-1, 1)."""
    assert nullspace([{0: 1, 1: 1}], QQ, 2) == [{1: 1, 0: -1}]


def test_solve_affine_unique_solution():
    rows = [({0: 1, 1: 1}, 3), ({0: 1, 1: -1}, 1)]
    particular, kernel = solve_affine(rows, QQ, 2)
    assert particular == {0: 2, 1: 1}
    assert kernel == []


def test_solve_affine_inconsistent():
    rows = [({0: 1}, 1), ({0: 1}, 2)]
    assert solve_affine(rows, QQ, 1) == (None, [])


def test_echelon_rank_over_prime_field():
    """(1, 1) and (2, 2) are dependent over F_3."""
    ech = Echelon(PrimeField(3))
    assert ech.insert({0: 1, 1: 1}) == 0
    assert ech.insert({0: 2, 1: 2}) is None
    assert ech.rank == 1
    assert ech.contains({0: 1, 1: 1})
    assert not ech.contains({1: 1})


def test_reduce_tracks_combination():
    ech = Echelon(QQ)
    ech.insert({0: Fraction(2)}, {"a": Fraction(1)})
    remainder, combo = ech.reduce({0: Fraction(4)})
    assert remainder == {}
    assert combo == {"a": Fraction(-2)}


def test_solve_affine_over_prime_field():
    """x0 + x1 = 2 over F_3."""
    particular, kernel = solve_affine([({0: 1, 1: 1}, 2)], PrimeField(3), 2)
    assert particular == {0: 2}
    assert kernel == [{1: 1, 0: 2}]


def test_extension_field_uses_echelon():
    two = F9.add(F9.one, F9.one)
    particular, kernel = solve_affine([({0: two, 1: F9.one}, F9.one)], F9, 2)
    assert particular == {0: F9.inv(two)}
    assert kernel == [{1: F9.one, 0: F9.neg(F9.inv(two))}]
    assert nullspace([{0: F9.one, 1: F9.one}], F9, 2) == [{1: F9.one, 0: F9.neg(F9.one)}]


def test_empty_system_is_free():
    assert nullspace([], QQ, 2) == [{0: 1}, {1: 1}]
    assert solve_affine([({}, 0)], PrimeField(5), 1) == ({}, [{0: 1}])


def _dot(field, row, vec):
    total = field.zero
    for col, value in row.items():
        if col in vec:
            total = field.add(total, field.mul(value, vec[col]))
    return total


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.lists(st.integers(0, 4), min_size=4, max_size=4), st.integers(0, 4)),
                min_size=1, max_size=4))
def test_solutions_satisfy_the_system_over_f5(entries):
    field = PrimeField(5)
    rows = [({c: v for c, v in enumerate(coeffs) if v}, rhs) for coeffs, rhs in entries]
    particular, kernel = solve_affine(rows, field, 4)
    ech = Echelon(field)
    for row, _ in rows:
        ech.insert(row)
    if particular is None:
        assert kernel == []
        return
    for row, rhs in rows:
        assert _dot(field, row, particular) % 5 == rhs % 5
        assert all(_dot(field, row, vec) % 5 == 0 for vec in kernel)
    assert len(kernel) == 4 - ech.rank
