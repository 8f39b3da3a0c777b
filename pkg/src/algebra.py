"""
Split-Exponent Polynomial Algebra

This module implements sparse polynomials in a system of regular parameters
(y_1..y_r | u_1..u_e) over an exact field, together with the valuations and
initial forms the characteristic polyhedron is built from.

Every term is stored as ExponentPair(B, A) -> coefficient where B is the
exponent over the y-block and A the exponent over the u-block. Polynomials
are immutable; arithmetic returns new objects.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from src.errors import BadParameters, FrameMismatch, NonDivisible, UnboundedFace
from src.fields import Field

logger = logging.getLogger(__name__)

# Orders and valuations use math.inf for "infinite"; finite values are int or Fraction.
Extended = Union[int, Fraction, float]
Point = Tuple[Fraction, ...]


class ExponentPair(NamedTuple):
    """Exponents of y^B u^A."""

    B: Tuple[int, ...]
    A: Tuple[int, ...]


@dataclass(frozen=True)
class Frame:
    """
    Ordered parameter names and the coefficient field.

    Args:
        y_names (Tuple[str, ...]): the y-block, r >= 1 names
        u_names (Tuple[str, ...]): the u-block, e >= 1 names
        field (Field): coefficient field
    """

    y_names: Tuple[str, ...]
    u_names: Tuple[str, ...]
    field: Field

    def __post_init__(self):
        object.__setattr__(self, "y_names", tuple(self.y_names))
        object.__setattr__(self, "u_names", tuple(self.u_names))
        if not self.y_names or not self.u_names:
            raise BadParameters("a frame needs at least one y and one u variable")
        names = self.y_names + self.u_names
        if len(set(names)) != len(names):
            raise BadParameters(f"variable names must be distinct: {names}")

    @property
    def r(self) -> int:
        return len(self.y_names)

    @property
    def e(self) -> int:
        return len(self.u_names)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.y_names + self.u_names

    def locate(self, name: str) -> Tuple[str, int]:
        """('y', i) or ('u', j) for a variable name."""
        if name in self.y_names:
            return "y", self.y_names.index(name)
        if name in self.u_names:
            return "u", self.u_names.index(name)
        raise FrameMismatch(f"variable {name} is not in frame {self.describe()}")

    def with_field(self, field: Field) -> "Frame":
        return Frame(self.y_names, self.u_names, field)

    def with_names(self, y_names: Sequence[str], u_names: Sequence[str]) -> "Frame":
        return Frame(tuple(y_names), tuple(u_names), self.field)

    def describe(self) -> str:
        return f"({' '.join(self.y_names)} | {' '.join(self.u_names)}) over {self.field.spec_text()}"


class Polynomial:
    """
    Immutable sparse polynomial over a Frame.

    Args:
        frame (Frame): the parameter system
        terms (Mapping[ExponentPair, Any]): exponents -> field element; zeros are dropped
    """

    __slots__ = ("frame", "terms", "_hash")

    def __init__(self, frame: Frame, terms: Optional[Mapping[ExponentPair, Any]] = None):
        field = frame.field
        clean = {}
        for exps, coeff in (terms or {}).items():
            if not field.is_zero(coeff):
                clean[ExponentPair(tuple(exps[0]), tuple(exps[1]))] = coeff
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # --- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, frame: Frame) -> "Polynomial":
        return cls(frame, {})

    @classmethod
    def constant(cls, frame: Frame, c: Any) -> "Polynomial":
        return cls(frame, {ExponentPair((0,) * frame.r, (0,) * frame.e): c})

    @classmethod
    def monomial(cls, frame: Frame, B: Sequence[int], A: Sequence[int], c: Any = None) -> "Polynomial":
        coeff = frame.field.one if c is None else c
        return cls(frame, {ExponentPair(tuple(B), tuple(A)): coeff})

    @classmethod
    def variable(cls, frame: Frame, name: str) -> "Polynomial":
        block, idx = frame.locate(name)
        B = [0] * frame.r
        A = [0] * frame.e
        (B if block == "y" else A)[idx] = 1
        return cls.monomial(frame, B, A)

    # --- basic queries --------------------------------------------------

    @property
    def field(self) -> Field:
        return self.frame.field

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.frame == other.frame and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.frame, frozenset(self.terms.items()))))
        return self._hash

    def coefficient(self, B: Sequence[int], A: Sequence[int]) -> Any:
        return self.terms.get(ExponentPair(tuple(B), tuple(A)), self.field.zero)

    def sorted_terms(self) -> List[Tuple[ExponentPair, Any]]:
        """Terms in canonical order: y-exponent descending, then u-exponent descending."""
        return sorted(self.terms.items(), key=lambda item: (item[0].B, item[0].A), reverse=True)

    def multiplicity(self) -> Extended:
        """Order at the origin (minimal total degree), inf for zero."""
        if not self.terms:
            return math.inf
        return min(sum(ex.B) + sum(ex.A) for ex in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(ex.B) + sum(ex.A) for ex in self.terms}
        return len(degrees) <= 1

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return self.filter(lambda ex, c: sum(ex.B) + sum(ex.A) == degree)

    def filter(self, keep: Callable[[ExponentPair, Any], bool]) -> "Polynomial":
        return Polynomial(self.frame, {ex: c for ex, c in self.terms.items() if keep(ex, c)})

    # --- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.frame != self.frame:
                raise FrameMismatch(f"{other.frame.describe()} vs {self.frame.describe()}")
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.frame, self.field.from_int(other))
        return Polynomial.constant(self.frame, other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        field = self.field
        terms = dict(self.terms)
        for ex, c in other.terms.items():
            terms[ex] = field.add(terms.get(ex, field.zero), c)
        return Polynomial(self.frame, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        field = self.field
        return Polynomial(self.frame, {ex: field.neg(c) for ex, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        field = self.field
        terms: Dict[ExponentPair, Any] = {}
        for ex1, c1 in self.terms.items():
            for ex2, c2 in other.terms.items():
                ex = ExponentPair(tuple(a + b for a, b in zip(ex1.B, ex2.B)),
                                  tuple(a + b for a, b in zip(ex1.A, ex2.A)))
                terms[ex] = field.add(terms.get(ex, field.zero), field.mul(c1, c2))
        return Polynomial(self.frame, terms)

    __rmul__ = __mul__

    def scale(self, c: Any) -> "Polynomial":
        field = self.field
        return Polynomial(self.frame, {ex: field.mul(c, v) for ex, v in self.terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise BadParameters("negative polynomial power")
        result = Polynomial.constant(self.frame, self.field.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # --- monomial maps ---------------------------------------------------

    def map_monomials(self, fn: Callable[[ExponentPair], ExponentPair],
                      frame: Optional[Frame] = None) -> "Polynomial":
        """
        Apply a map on exponents, summing colliding terms.

        Raises NonDivisible when the image has a negative exponent.
        """
        target = frame or self.frame
        field = target.field
        terms: Dict[ExponentPair, Any] = {}
        for ex, c in self.terms.items():
            image = fn(ex)
            if min(image.B + image.A, default=0) < 0:
                raise NonDivisible(f"monomial map leaves the polynomial ring at {ex}")
            terms[image] = field.add(terms.get(image, field.zero), c)
        return Polynomial(target, terms)

    def divide_by_u(self, exponent: Sequence[int]) -> "Polynomial":
        """Exact division by u^exponent."""
        shift = tuple(exponent)
        return self.map_monomials(lambda ex: ExponentPair(ex.B, tuple(a - s for a, s in zip(ex.A, shift))))

    def embed(self, frame: Frame) -> "Polynomial":
        """Same terms in `frame`, coefficients mapped into its field."""
        if frame == self.frame:
            return self
        if (frame.r, frame.e) != (self.frame.r, self.frame.e):
            raise FrameMismatch(f"cannot embed {self.frame.describe()} into {frame.describe()}")
        source = self.field
        return Polynomial(frame, {ex: frame.field.embed(c, source) for ex, c in self.terms.items()})

    # --- printing ------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        field = self.field
        parts: List[str] = []
        for ex, c in self.sorted_terms():
            mono = _monomial_text(self.frame, ex)
            negative = field.is_negative(c)
            magnitude = field.neg(c) if negative else c
            if mono and field.is_one(magnitude):
                text = mono
            else:
                coeff = field.to_str(magnitude)
                if " " in coeff:
                    coeff = f"({coeff})"
                text = f"{coeff}*{mono}" if mono else coeff
            if not parts:
                parts.append(f"-{text}" if negative else text)
            else:
                parts.append(f"- {text}" if negative else f"+ {text}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def to_dict(self) -> Dict[str, Any]:
        field = self.field
        return {
            "text": str(self),
            "terms": [{"B": list(ex.B), "A": list(ex.A), "coefficient": field.to_str(c)}
                      for ex, c in self.sorted_terms()],
        }


def _monomial_text(frame: Frame, ex: ExponentPair) -> str:
    factors = []
    for name, k in zip(frame.names, ex.B + ex.A):
        if k == 1:
            factors.append(name)
        elif k > 1:
            factors.append(f"{name}^{k}")
    return "*".join(factors)


@dataclass(frozen=True)
class LinearForm:
    """
    Semi-positive linear form L(A) = sum c_i a_i on the u-exponents.

    Args:
        coefficients (Tuple[Fraction, ...]): c_i >= 0, not all zero
    """

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        if not coeffs or any(c < 0 for c in coeffs) or all(c == 0 for c in coeffs):
            raise BadParameters(f"linear form must be semi-positive and nonzero: {coeffs}")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def standard(cls, e: int) -> "LinearForm":
        """L_0 = a_1 + ... + a_e."""
        return cls((Fraction(1),) * e)

    @property
    def positive(self) -> bool:
        return all(c > 0 for c in self.coefficients)

    @property
    def monic(self) -> bool:
        return self.coefficients[0] == 1

    def __call__(self, point: Sequence) -> Fraction:
        return sum((c * x for c, x in zip(self.coefficients, point)), Fraction(0))


@dataclass(frozen=True)
class Selector:
    """Which initial form to take: zero, form(L), vertex(v) or face(L, level)."""

    kind: str
    form: Optional[LinearForm] = None
    point: Optional[Point] = None
    level: Optional[Fraction] = None

    @classmethod
    def zero(cls) -> "Selector":
        return cls("zero")

    @classmethod
    def of_form(cls, form: LinearForm) -> "Selector":
        return cls("form", form=form)

    @classmethod
    def at_vertex(cls, point: Sequence) -> "Selector":
        return cls("vertex", point=tuple(Fraction(x) for x in point))

    @classmethod
    def on_face(cls, form: LinearForm, level) -> "Selector":
        return cls("face", form=form, level=Fraction(level))


def order_mod_u(f: Polynomial) -> Extended:
    """n_(u)(f): minimal |B| over the terms with A = 0, inf when f lies in <u>."""
    orders = [sum(ex.B) for ex in f.terms if not any(ex.A)]
    return min(orders) if orders else math.inf


def valuation(f: Polynomial, L: LinearForm) -> Extended:
    """v_L(f) = min |B| + L(A) over the terms; inf for f = 0."""
    if f.is_zero():
        return math.inf
    return min(Fraction(sum(ex.B)) + L(ex.A) for ex in f.terms)


def initial_form(f: Polynomial, selector: Selector) -> Polynomial:
    """
    Graded initial form of f, as a polynomial in the same frame.

    Args:
        f (Polynomial): the polynomial
        selector (Selector): zero, form(L), vertex(v) or face(L, level)

    Returns:
        Polynomial: the selected initial part
    """
    if selector.kind == "form":
        v = valuation(f, selector.form)
        if v == math.inf:
            return f
        return f.filter(lambda ex, c: sum(ex.B) + selector.form(ex.A) == v)

    n = order_mod_u(f)
    if n == math.inf:
        raise BadParameters(f"initial form needs a finite order mod u: {f}")

    def in_zero(ex: ExponentPair) -> bool:
        return not any(ex.A) and sum(ex.B) == n

    if selector.kind == "zero":
        return f.filter(lambda ex, c: in_zero(ex))

    if selector.kind == "vertex":
        v = selector.point

        def on_vertex(ex: ExponentPair) -> bool:
            weight = n - sum(ex.B)
            return weight > 0 and all(a == weight * x for a, x in zip(ex.A, v))

        return f.filter(lambda ex, c: in_zero(ex) or on_vertex(ex))

    if selector.kind == "face":
        L = selector.form
        if not L.positive:
            raise UnboundedFace(f"face of {L.coefficients} is unbounded")

        def on_face(ex: ExponentPair) -> bool:
            weight = n - sum(ex.B)
            return weight > 0 and L(ex.A) == selector.level * weight

        return f.filter(lambda ex, c: in_zero(ex) or on_face(ex))

    raise BadParameters(f"unknown selector {selector.kind}")


def substitute(f: Polynomial, mapping: Mapping[str, Polynomial],
               target: Optional[Frame] = None) -> Polynomial:
    """
    Replace variables by polynomials.

    Variables not in `mapping` map to the variable of the same name in the
    target frame. Coefficients of f are embedded into the target field.

    Args:
        f (Polynomial): the polynomial
        mapping (Mapping[str, Polynomial]): images, all in the target frame
        target (Frame): frame of the result (default: f's frame)

    Returns:
        Polynomial: f with the substitution applied
    """
    target = target or f.frame
    for name, image in mapping.items():
        if image.frame != target:
            raise FrameMismatch(f"image of {name} lives in {image.frame.describe()}, not {target.describe()}")
    images = []
    for name in f.frame.names:
        if name in mapping:
            images.append(mapping[name])
        else:
            images.append(Polynomial.variable(target, name))

    cache: Dict[Tuple[int, int], Polynomial] = {}

    def power(idx: int, k: int) -> Polynomial:
        key = (idx, k)
        if key not in cache:
            if k == 1:
                cache[key] = images[idx]
            elif k % 2 == 0:
                half = power(idx, k // 2)
                cache[key] = half * half
            else:
                cache[key] = power(idx, k - 1) * images[idx]
        return cache[key]

    source_field = f.field
    field = target.field
    acc: Dict[ExponentPair, Any] = {}
    for ex, c in f.terms.items():
        term = Polynomial.constant(target, field.embed(c, source_field))
        for idx, k in enumerate(ex.B + ex.A):
            if k:
                term = term * power(idx, k)
        for tex, tc in term.terms.items():
            acc[tex] = field.add(acc.get(tex, field.zero), tc)
    return Polynomial(target, acc)


def monomial_exponents(nvars: int, degree: int) -> Iterator[Tuple[int, ...]]:
    """All exponent vectors of the given total degree."""
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for idx in combo:
            exps[idx] += 1
        yield tuple(exps)
