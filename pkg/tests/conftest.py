"""
Shared frames, builders and strategies for the resolver tests.
"""

from pathlib import Path

import pytest
from hypothesis import strategies as st

from config.config import JOBS_DIR
from src.algebra import ExponentPair, Frame, Polynomial
from src.charpoly import BoundaryComponent, Label
from src.fields import PrimeField, RationalField
from src.job_parser import parse_polynomial

QQ = RationalField()
F2 = PrimeField(2)
F3 = PrimeField(3)

FRAME_Q1 = Frame(("y",), ("u1",), QQ)
FRAME_Q2 = Frame(("y",), ("u1", "u2"), QQ)
FRAME_F3 = Frame(("y",), ("u1", "u2"), F3)


def poly(text: str, frame: Frame = FRAME_Q2) -> Polynomial:
    return parse_polynomial(text, frame)


def label(*texts: str, frame: Frame = FRAME_Q2, boundary=()) -> Label:
    """A label from generator texts; boundary is a list of (ident, text, old)."""
    components = [BoundaryComponent(ident, poly(text, frame), old) for ident, text, old in boundary]
    return Label.build(frame, [poly(t, frame) for t in texts], components)


@pytest.fixture
def jobs_dir() -> Path:
    return JOBS_DIR


@pytest.fixture
def max_contact_label() -> Label:
    """y^3 + y u1^36 u2^36 + u1^2 u2 (u1+u2)^12 over F_3."""
    return label("y^3 + y*u1^36*u2^36 + u1^2*u2*(u1+u2)^12", frame=FRAME_F3)


@pytest.fixture
def cusp_label() -> Label:
    return label("y^2 + u1^3", frame=FRAME_Q1)


# --- hypothesis strategies ------------------------------------------------------

points2 = st.lists(
    st.tuples(st.fractions(min_value=0, max_value=10, max_denominator=6),
              st.fractions(min_value=0, max_value=10, max_denominator=6)),
    min_size=1, max_size=8,
)


@st.composite
def weierstrass_polynomials(draw, frame: Frame = FRAME_Q2, max_exponent: int = 8):
    """y^n plus a few terms y^b u^A with b < n and |A| >= 1, integer coefficients."""
    n = draw(st.integers(min_value=2, max_value=3))
    terms = {ExponentPair((n,), (0,) * frame.e): frame.field.one}
    count = draw(st.integers(min_value=1, max_value=4))
    for _ in range(count):
        b = draw(st.integers(min_value=0, max_value=n - 1))
        A = tuple(draw(st.integers(min_value=0, max_value=max_exponent)) for _ in range(frame.e))
        if not any(A):
            A = (1,) + (0,) * (frame.e - 1)
        c = draw(st.integers(min_value=1, max_value=5))
        terms[ExponentPair((b,), A)] = frame.field.from_int(c)
    return Polynomial(frame, terms)


@st.composite
def labels(draw, frame: Frame = FRAME_Q2):
    return Label.build(frame, [draw(weierstrass_polynomials(frame))])


@st.composite
def tschirnhausen_labels(draw, frame: Frame = FRAME_Q2, max_exponent: int = 8):
    """y^n plus terms y^b u^A with b <= n - 2; in characteristic 0 every vertex is already prepared."""
    n = draw(st.integers(min_value=2, max_value=3))
    terms = {ExponentPair((n,), (0,) * frame.e): frame.field.one}
    for _ in range(draw(st.integers(min_value=1, max_value=4))):
        b = draw(st.integers(min_value=0, max_value=n - 2))
        A = tuple(draw(st.integers(min_value=0, max_value=max_exponent)) for _ in range(frame.e))
        if not any(A):
            A = (0,) * (frame.e - 1) + (1,)
        terms[ExponentPair((b,), A)] = frame.field.from_int(draw(st.integers(min_value=1, max_value=5)))
    return Label.build(frame, [Polynomial(frame, terms)])
