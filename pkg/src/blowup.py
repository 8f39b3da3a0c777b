"""
Blow-up Chart Transforms

This module applies the local charts of point and curve blow-ups to labels:

- point-u1:          y = u1 y', u_j = u1 u_j'         (origin of the u1-chart)
- point-u2:          y = u2 y', u1 = u2 u1'           (the point (0:1), e = 2)
- point-translated:  new parameter u2 + phi u1, then point-u1
- point-nonrational: extend k by a root t of Phi(1, t), then point-u1 and u2' -> u2' + t
- curve:             y = u_j y' along the centre (y, u_j)

Variable names are kept across charts; a chart records which substitution
was made. Generators are divided by u^{n_i}; boundary components are replaced
by their strict transforms and the exceptional divisor is added as a new
component.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from src.algebra import ExponentPair, Frame, Polynomial, substitute
from src.charpoly import BoundaryComponent, Label, char_polyhedron
from src.errors import BadParameters, NonDivisible, ReducibleModulus, UnsupportedField, WrongDimension
from src.fields import ExtensionField, Field, PrimeField, RationalField
from src.polyhedron import AffineMap, delta_face, delta_value, fraction_text

logger = logging.getLogger(__name__)

EXTENSION_NAME = "theta"


class ChartKind(Enum):
    POINT_U1 = "point-u1"
    POINT_U2 = "point-u2"
    POINT_TRANSLATED = "point-translated"
    POINT_NONRATIONAL = "point-nonrational"
    CURVE = "curve"


@dataclass(frozen=True)
class ChartSpec:
    """
    A chart of a blow-up.

    Args:
        kind (ChartKind): which chart
        phi (Polynomial): translation, the new second parameter is u2 + phi*u1
        modulus (Polynomial): homogeneous irreducible Phi(U1, U2) of a non-rational point
        index (int): 0-based u-index of the curve centre (y, u_{index+1})
    """

    kind: ChartKind
    phi: Optional[Polynomial] = None
    modulus: Optional[Polynomial] = None
    index: int = 0

    @classmethod
    def point_u1(cls) -> "ChartSpec":
        return cls(ChartKind.POINT_U1)

    @classmethod
    def point_u2(cls) -> "ChartSpec":
        return cls(ChartKind.POINT_U2)

    @classmethod
    def translated(cls, phi: Polynomial) -> "ChartSpec":
        return cls(ChartKind.POINT_TRANSLATED, phi=phi)

    @classmethod
    def nonrational(cls, modulus: Polynomial) -> "ChartSpec":
        return cls(ChartKind.POINT_NONRATIONAL, modulus=modulus)

    @classmethod
    def curve(cls, index: int = 0) -> "ChartSpec":
        return cls(ChartKind.CURVE, index=index)

    @property
    def is_point(self) -> bool:
        return self.kind is not ChartKind.CURVE

    def exceptional_index(self) -> int:
        """u-index of the exceptional divisor in the chart."""
        if self.kind is ChartKind.POINT_U2:
            return 1
        if self.kind is ChartKind.CURVE:
            return self.index
        return 0

    def describe(self) -> str:
        if self.kind is ChartKind.POINT_TRANSLATED:
            return f"{self.kind.value}(phi={self.phi})"
        if self.kind is ChartKind.POINT_NONRATIONAL:
            return f"{self.kind.value}(Phi={self.modulus})"
        if self.kind is ChartKind.CURVE:
            return f"curve-u{self.index + 1}"
        return self.kind.value

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "text": self.describe()}
        if self.phi is not None:
            data["phi"] = str(self.phi)
        if self.modulus is not None:
            data["modulus"] = str(self.modulus)
        if self.kind is ChartKind.CURVE:
            data["index"] = self.index
        return data


def polyhedron_map(chart: ChartSpec, e: int) -> AffineMap:
    """The vertex map the chart induces on Delta."""
    if chart.kind is ChartKind.POINT_U2:
        if e != 2:
            raise WrongDimension("point-u2 chart needs e = 2")
        return AffineMap.point_u2()
    if chart.kind is ChartKind.CURVE:
        return AffineMap.curve(e, chart.index)
    return AffineMap.point_u1(e)


# --- monomial maps ------------------------------------------------------------

def _point_map(n: int, axis: int):
    def fn(ex: ExponentPair) -> ExponentPair:
        A = list(ex.A)
        A[axis] = sum(ex.B) + sum(ex.A) - n
        return ExponentPair(ex.B, tuple(A))
    return fn


def _curve_map(n: int, index: int):
    def fn(ex: ExponentPair) -> ExponentPair:
        A = list(ex.A)
        A[index] = sum(ex.B) + ex.A[index] - n
        return ExponentPair(ex.B, tuple(A))
    return fn


def _is_unit(f: Polynomial) -> bool:
    return f.multiplicity() == 0


def _strict_boundary(label: Label, frame: Frame, transform, order_of) -> List[BoundaryComponent]:
    """Strict transforms of the boundary; components missing the new point are dropped."""
    kept = []
    for comp in label.boundary:
        l = comp.generator.embed(frame) if comp.generator.frame != frame else comp.generator
        image = transform(l, order_of(l))
        if _is_unit(image):
            logger.debug(f"boundary {comp.ident} leaves the chart")
            continue
        kept.append(BoundaryComponent(comp.ident, image, comp.old))
    return kept


def _new_component(label: Label, frame: Frame, axis: int) -> BoundaryComponent:
    taken = {c.ident for c in label.boundary}
    k = 1
    while f"E{k}" in taken:
        k += 1
    return BoundaryComponent(f"E{k}", Polynomial.variable(frame, frame.u_names[axis]), old=False)


def _rebuild(frame: Frame, generators: Sequence[Polynomial], boundary: Sequence[BoundaryComponent]) -> Label:
    for g in generators:
        if _is_unit(g):
            raise NonDivisible("chart origin is not on the strict transform")
    return Label.build(frame, generators, boundary)


def _apply_point(label: Label, axis: int) -> Label:
    frame = label.frame
    generators = [f.map_monomials(_point_map(n, axis)) for f, n in zip(label.generators, label.orders)]
    boundary = _strict_boundary(label, frame, lambda l, m: l.map_monomials(_point_map(m, axis)),
                                lambda l: int(l.multiplicity()))
    boundary.append(_new_component(label, frame, axis))
    return _rebuild(frame, generators, boundary)


def _translate_u2(label: Label, phi: Polynomial) -> Label:
    """Rewrite the label in (u1, u2 + phi*u1)."""
    frame = label.frame
    if phi.frame != frame:
        phi = phi.embed(frame)
    if any(any(ex.B) for ex in phi.terms):
        raise BadParameters(f"translation phi must not involve y: {phi}")
    u1 = Polynomial.variable(frame, frame.u_names[0])
    u2 = Polynomial.variable(frame, frame.u_names[1])
    mapping = {frame.u_names[1]: u2 - phi * u1}
    generators = [substitute(f, mapping) for f in label.generators]
    boundary = [BoundaryComponent(c.ident, substitute(c.generator, mapping), c.old) for c in label.boundary]
    return Label.build(frame, generators, boundary)


def dehomogenized(form: Polynomial) -> Dict[int, Any]:
    """Phi(1, t) of a form in U1, U2 as {degree in t: coefficient}."""
    field = form.field
    coeffs: Dict[int, Any] = {}
    for ex, c in form.terms.items():
        coeffs[ex.A[1]] = field.add(coeffs.get(ex.A[1], field.zero), c)
    return {k: c for k, c in coeffs.items() if not field.is_zero(c)}


def _extension_for(modulus: Polynomial, frame: Frame) -> ExtensionField:
    field = frame.field
    if not isinstance(field, PrimeField):
        raise UnsupportedField(f"non-rational charts need a prime base field, not {field.spec_text()}")
    if any(any(ex.B) for ex in modulus.terms) or not modulus.is_homogeneous():
        raise BadParameters(f"Phi must be a form in the u-variables: {modulus}")
    degree = int(modulus.multiplicity())
    coeffs = dehomogenized(modulus)
    if degree < 2:
        raise BadParameters(f"Phi must have degree >= 2: {modulus}")
    if max(coeffs, default=-1) != degree:
        raise ReducibleModulus(f"Phi is divisible by {frame.u_names[0]}: {modulus}")
    high_first = tuple(coeffs.get(k, 0) for k in range(degree, -1, -1))
    name = EXTENSION_NAME
    while name in frame.names:
        name = name + "_"
    return ExtensionField(field.p, high_first, name)


def point_chart(label: Label, chart: ChartSpec) -> Label:
    """
    Transform of a label at a closed point of the exceptional divisor.

    Args:
        label (Label): the label at the centre
        chart (ChartSpec): a point chart

    Returns:
        Label: the transformed label with recomputed orders

    Raises:
        NonDivisible: the chart is not defined for this label
        ReducibleModulus: Phi of a non-rational chart is reducible
    """
    kind = chart.kind
    if kind is ChartKind.CURVE:
        raise BadParameters("curve charts go through curve_chart()")
    if kind is not ChartKind.POINT_U1 and label.e != 2:
        raise WrongDimension(f"{kind.value} chart needs e = 2")

    if kind is ChartKind.POINT_U1:
        out = _apply_point(label, 0)
    elif kind is ChartKind.POINT_U2:
        out = _apply_point(label, 1)
    elif kind is ChartKind.POINT_TRANSLATED:
        out = _apply_point(_translate_u2(label, chart.phi), 0)
    else:
        extension = _extension_for(chart.modulus, label.frame)
        frame = label.frame.with_field(extension)
        lifted = Label.build(frame, [f.embed(frame) for f in label.generators],
                             [BoundaryComponent(c.ident, c.generator.embed(frame), c.old) for c in label.boundary])
        charted = _apply_point(lifted, 0)
        u2_name = frame.u_names[1]
        theta = Polynomial.constant(frame, extension.generator)
        mapping = {u2_name: Polynomial.variable(frame, u2_name) + theta}
        generators = [substitute(f, mapping) for f in charted.generators]
        boundary = []
        for c in charted.boundary:
            moved = substitute(c.generator, mapping)
            if not _is_unit(moved):
                boundary.append(BoundaryComponent(c.ident, moved, c.old))
        out = _rebuild(frame, generators, boundary)
    logger.info(f"{chart.describe()}: orders {label.orders} -> {out.orders}")
    return out


def curve_chart(label: Label, index: int = 0) -> Label:
    """
    Transform under the blow-up of the curve (y, u_{index+1}).

    Raises:
        NonDivisible: v_p(f_i) < n_i, the centre is not permissible for this presentation
    """
    if not 0 <= index < label.e:
        raise BadParameters(f"curve index {index} outside 0..{label.e - 1}")
    frame = label.frame
    generators = [f.map_monomials(_curve_map(n, index)) for f, n in zip(label.generators, label.orders)]

    def order_along(l: Polynomial) -> int:
        return min(sum(ex.B) + ex.A[index] for ex in l.terms)

    boundary = _strict_boundary(label, frame, lambda l, m: l.map_monomials(_curve_map(m, index)), order_along)
    boundary.append(_new_component(label, frame, index))
    out = _rebuild(frame, generators, boundary)
    logger.info(f"curve-u{index + 1}: orders {label.orders} -> {out.orders}")
    return out


def apply_chart(label: Label, chart: ChartSpec) -> Label:
    if chart.kind is ChartKind.CURVE:
        return curve_chart(label, chart.index)
    return point_chart(label, chart)


# --- nearness -------------------------------------------------------------------

class NearnessKind(Enum):
    NOT_NEAR = "not-near"
    NEAR = "near"
    VERY_NEAR = "very-near"


@dataclass(frozen=True)
class Nearness:
    kind: NearnessKind
    delta: Any = None
    conclusive: bool = True

    @property
    def near(self) -> bool:
        return self.kind is not NearnessKind.NOT_NEAR

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "delta": None if self.delta is None else fraction_text(self.delta),
            "conclusive": self.conclusive,
        }


def classify_nearness(label_out: Optional[Label], prepared: bool,
                      orders_in: Optional[Sequence[int]] = None) -> Nearness:
    """
    Near iff delta' >= 1, very near iff delta' > 1.

    Args:
        label_out (Label): the chart transform, None when the chart was undefined
        prepared (bool): whether label_out is prepared in {|A| <= 1}; only then is NotNear conclusive
        orders_in (Sequence[int]): orders before the chart; a drop means not near
    """
    if label_out is None:
        return Nearness(NearnessKind.NOT_NEAR, None, True)
    delta = delta_value(char_polyhedron(label_out))
    if orders_in is not None and tuple(label_out.orders) != tuple(orders_in):
        return Nearness(NearnessKind.NOT_NEAR, delta, True)
    if delta > 1:
        return Nearness(NearnessKind.VERY_NEAR, delta, True)
    if delta >= 1:
        return Nearness(NearnessKind.NEAR, delta, True)
    return Nearness(NearnessKind.NOT_NEAR, delta, prepared)


# --- near point enumeration ---------------------------------------------------

def face_polynomials(label: Label) -> List[Polynomial]:
    """P_B(U1, U2): the delta-face coefficient forms of the y-monomials with |B| < n_i."""
    delta = char_polyhedron(label)
    if delta.is_empty:
        return []
    level, _ = delta_face(delta)
    frame = label.frame
    forms = []
    for f, n in zip(label.generators, label.orders):
        grouped: Dict[Tuple[int, ...], Dict[ExponentPair, Any]] = {}
        for ex, c in f.terms.items():
            weight = n - sum(ex.B)
            if weight > 0 and sum(ex.A) == level * weight:
                grouped.setdefault(ex.B, {})[ExponentPair((0,) * frame.r, ex.A)] = c
        forms.extend(Polynomial(frame, terms) for _, terms in sorted(grouped.items()))
    return forms


def _roots_and_factors(coeffs: Dict[int, Any], field: Field) -> Tuple[List[Any], List[List[int]]]:
    """Roots in k and irreducible factors of degree >= 2 (high-first, F_p only) of a polynomial in t."""
    degree = max(coeffs)
    if isinstance(field, PrimeField):
        high_first = ZZ.map([int(coeffs.get(k, 0)) for k in range(degree, -1, -1)])
        _, factors = gf_factor(high_first, field.p, ZZ)
        roots, higher = [], []
        for g, _ in factors:
            g = [int(c) for c in g]
            if len(g) == 2:
                roots.append((-g[1]) % field.p)
            elif len(g) > 2:
                higher.append(g)
        return roots, higher
    if isinstance(field, RationalField):
        t = sympy.Symbol("t")
        expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in coeffs.items())
        _, factors = sympy.Poly(expr, t, domain="QQ").factor_list()
        roots = []
        for g, _ in factors:
            if g.degree() == 1:
                a, b = g.all_coeffs()
                root = -sympy.Rational(b) / sympy.Rational(a)
                roots.append(Fraction(int(root.p), int(root.q)))
            else:
                logger.warning(f"skipping non-rational factor {g.as_expr()} over Q")
        return roots, []
    roots = []
    for c in field.elements():
        value = field.zero
        for k, a in coeffs.items():
            value = field.add(value, field.mul(a, field.pow(c, k)))
        if field.is_zero(value):
            roots.append(c)
    if len(roots) < degree:
        logger.warning(f"higher-degree factors over {field.spec_text()} are not enumerated")
    return roots, []


def near_point_charts(label: Label) -> List[ChartSpec]:
    """
    Candidate near points on the exceptional line, read off the delta-face.

    The plain point-u1 chart comes first; then one translated chart per root of
    P_B(1, t), one non-rational chart per irreducible factor of degree >= 2
    (prime fields), and point-u2 when U1 divides some P_B.
    """
    if label.e == 1:
        return [ChartSpec.point_u1()]
    field = label.field
    frame = label.frame
    charts = [ChartSpec.point_u1()]
    seen_roots = {field.zero}
    seen_factors = set()
    add_u2 = False
    for P in face_polynomials(label):
        coeffs = dehomogenized(P)
        total = int(P.multiplicity())
        if max(coeffs) < total:
            add_u2 = True
        if max(coeffs) == 0:
            continue
        roots, higher = _roots_and_factors(coeffs, field)
        for c in roots:
            if c in seen_roots:
                continue
            seen_roots.add(c)
            charts.append(ChartSpec.translated(Polynomial.constant(frame, field.neg(c))))
        for g in higher:
            key = tuple(g)
            if key in seen_factors:
                continue
            seen_factors.add(key)
            k = len(g) - 1
            terms = {ExponentPair((0,) * frame.r, (i, k - i)): c % field.p for i, c in enumerate(g) if c % field.p}
            charts.append(ChartSpec.nonrational(Polynomial(frame, terms)))
    if add_u2:
        charts.append(ChartSpec.point_u2())
    logger.debug(f"near point candidates: {[c.describe() for c in charts]}")
    return charts
