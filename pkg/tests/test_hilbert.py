"""
Tests for Hilbert functions of monomial ideals and the a(P) decomposition.
"""

import math

import pytest
from hypothesis import given, settings, strategies as st

from src.algebra import monomial_exponents
from src.errors import BadParameters, NotAHilbertPolynomial, ScaleExceeded
from src.hilbert import (
    ADecomposition,
    HilbertPolynomial,
    compare,
    decompose,
    hf_monomial,
    hilbert_report,
    iterate_sum,
    parse_monomial_ideal,
    phi,
    recompose,
)


def test_hilbert_function_of_x2_xy():
    H = hf_monomial([(2, 0), (1, 1)], 2)
    assert H.head(6) == [1, 2, 1, 1, 1, 1]
    assert str(H.tail) == "1"
    assert H.start == 2
    assert str(decompose(H.tail)) == "(0)"


def test_artinian_ideal_values_beyond_generator_degree():
    """(x^4, y^4, z^4) still has three standard monomials in degree 8."""
    H = hf_monomial([(4, 0, 0), (0, 4, 0), (0, 0, 4)], 3)
    assert H(7) == 6
    assert H(8) == 3
    assert H(9) == 1
    assert H(10) == 0
    assert H.tail.is_zero


def test_polynomial_ring():
    H = hf_monomial([], 2)
    assert H.head(4) == [1, 2, 3, 4]
    assert H.tail == HilbertPolynomial.parse("T + 1")


def test_iterated_sum():
    H = iterate_sum(hf_monomial([], 1), 1)
    assert H.head(4) == [1, 2, 3, 4]
    assert H.tail == HilbertPolynomial.parse("T + 1")


def test_decompositions():
    assert str(decompose(HilbertPolynomial.parse("T + 1"))) == "(1)"
    assert str(decompose(HilbertPolynomial.parse("2"))) == "(0,0)"
    assert str(decompose(HilbertPolynomial.parse("2*T + 1"))) == "(1,1)"
    assert str(decompose(HilbertPolynomial.of(0))) == "()"
    assert recompose(ADecomposition((1, 1))) == HilbertPolynomial.parse("2*T + 1")


def test_compare():
    assert compare(HilbertPolynomial.parse("T + 1"), HilbertPolynomial.parse("2")) == ">"
    assert compare(HilbertPolynomial.parse("2*T + 1"), HilbertPolynomial.parse("T + 1")) == ">"
    assert compare(HilbertPolynomial.parse("1"), HilbertPolynomial.parse("1")) == "="


def test_not_a_hilbert_polynomial():
    with pytest.raises(NotAHilbertPolynomial):
        HilbertPolynomial.parse("T/2")
    with pytest.raises(NotAHilbertPolynomial):
        decompose(HilbertPolynomial.of(-1))
    with pytest.raises(BadParameters):
        HilbertPolynomial.parse("x + 1")


def test_phi():
    assert phi(2, 3) == 4
    assert phi(3, 0) == 1
    assert phi(1, 5) == 1


def test_parse_monomial_ideal():
    assert parse_monomial_ideal("x^2, x*y", ["x", "y"]) == [(2, 0), (1, 1)]
    assert parse_monomial_ideal("1", ["x"]) == [(0,)]
    with pytest.raises(BadParameters):
        parse_monomial_ideal("z", ["x", "y"])


def test_scale_limits():
    with pytest.raises(ScaleExceeded):
        hf_monomial([], 7)
    with pytest.raises(ScaleExceeded):
        iterate_sum(hf_monomial([], 1), 6)


def test_hilbert_report():
    report = hilbert_report([(2, 0), (1, 1)], 2, t=1)
    assert report["values"][:4] == [1, 3, 4, 5]
    assert report["polynomial"] == "T + 2"
    assert report["a"] == "(1,0)"
    assert report["a_parts"] == [1, 0]


monomial_ideals = st.integers(min_value=1, max_value=3).flatmap(
    lambda nvars: st.tuples(
        st.just(nvars),
        st.lists(st.tuples(*[st.integers(min_value=0, max_value=4)] * nvars), min_size=0, max_size=4),
    )
)


@settings(max_examples=60, deadline=None)
@given(monomial_ideals)
def test_hilbert_function_counts_standard_monomials(ideal):
    nvars, generators = ideal
    H = hf_monomial(generators, nvars)
    for n in range(H.n0 + 4):
        standard = [m for m in monomial_exponents(nvars, n)
                    if not any(all(g <= e for g, e in zip(gen, m)) for gen in generators)]
        assert H(n) == len(standard)


@st.composite
def bounded_ideals(draw, max_vars: int = 4, max_degree: int = 8):
    """Up to four generators of degree <= max_degree in up to max_vars variables."""
    nvars = draw(st.integers(min_value=1, max_value=max_vars))
    generators = []
    for _ in range(draw(st.integers(min_value=0, max_value=4))):
        budget = draw(st.integers(min_value=0, max_value=max_degree))
        exps = []
        for _ in range(nvars):
            x = draw(st.integers(min_value=0, max_value=budget))
            exps.append(x)
            budget -= x
        generators.append(tuple(exps))
    return nvars, generators


def _tail(ideal) -> HilbertPolynomial:
    nvars, generators = ideal
    return hf_monomial(generators, nvars).tail


@settings(max_examples=100, deadline=None)
@given(bounded_ideals())
def test_decomposition_recomposes(ideal):
    P = _tail(ideal)
    a = decompose(P)
    assert list(a.parts) == sorted(a.parts, reverse=True)
    assert recompose(a) == P


@settings(max_examples=50, deadline=None)
@given(bounded_ideals(), bounded_ideals())
def test_compare_matches_values_for_large_n(first, second):
    P, Q = _tail(first), _tail(second)
    diff = P.poly - Q.poly
    if diff.is_zero:
        assert compare(P, Q) == "="
        return
    coeffs = diff.all_coeffs()
    root_bound = 1 + max((abs(c / coeffs[0]) for c in coeffs[1:]), default=0)
    n = max(50, int(math.ceil(root_bound)))
    assert compare(P, Q) == (">" if P(n) > Q(n) else "<")


def test_phi_is_the_polynomial_ring():
    for t in range(1, 5):
        ring = hf_monomial([], t)
        for n in range(21):
            assert phi(t, n) == math.comb(n + t - 1, n) == ring(n)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=3), max_size=6),
       st.lists(st.tuples(st.integers(min_value=0, max_value=5), st.integers(min_value=0, max_value=2)),
                max_size=12))
def test_descending_walks_reach_zero(start, moves):
    """
    Lower one part and refill with at most two copies of the new value; once
    the moves run out, drop the last part.
    """
    parts = sorted(start, reverse=True)
    current = recompose(ADecomposition(tuple(parts)))
    steps = 0
    for index, refill in moves:
        if not parts:
            break
        k = index % len(parts)
        if parts[k] == 0:
            parts = parts[:k]
        else:
            lowered = parts[k] - 1
            parts = parts[:k] + [lowered] * (1 + refill)
        following = recompose(ADecomposition(tuple(parts)))
        assert compare(following, current) == "<"
        current = following
        steps += 1
    while parts:
        parts = parts[:-1]
        following = recompose(ADecomposition(tuple(parts)))
        assert compare(following, current) == "<"
        current = following
        steps += 1
    assert current.is_zero
    assert steps <= len(moves) + len(start) + 2 * len(moves)
