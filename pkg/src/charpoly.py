"""
Characteristic Polyhedra of Labels

This module holds the Label type (generators f_1..f_N with their cached orders
n_i = n_(u)(f_i), the parameter frame and the boundary components) and the
operations that read invariants off a label:

- char_polyhedron / essential_points / boundary_polyhedron
- nu_star for homogeneous ideals
- directrix and the strict admissibility check
- delta_criteria (delta >= 1, > 1, = 1 via multiplicities)
"""

import itertools
import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from config.config import DIRECTRIX_CONFIG
from src.algebra import (
    ExponentPair,
    Frame,
    Polynomial,
    Selector,
    initial_form,
    monomial_exponents,
    order_mod_u,
    substitute,
)
from src.errors import (
    BadIndex,
    BadParameters,
    BoundaryInUIdeal,
    FrameMismatch,
    InvariantViolation,
    UnsupportedField,
)
from src.fields import Field
from src.linalg import Echelon, nullspace
from src.polyhedron import FSubset, delta_value, fraction_text, minimal_fsubset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryComponent:
    """
    A boundary component through the point, given by a regular parameter l.

    Args:
        ident (str): name of the component
        generator (Polynomial): l, of multiplicity 1
        old (bool): old components enter Delta^O, new ones do not
    """

    ident: str
    generator: Polynomial
    old: bool = True

    def __post_init__(self):
        if self.generator.multiplicity() != 1:
            raise BadParameters(f"boundary component {self.ident} must have multiplicity 1: {self.generator}")

    def to_dict(self) -> Dict[str, Any]:
        return {"id": self.ident, "generator": str(self.generator), "old": self.old}


@dataclass(frozen=True)
class Label:
    """
    The data (f, y, u) with its boundary.

    Build instances with Label.build(), which computes and validates the orders.
    """

    frame: Frame
    generators: Tuple[Polynomial, ...]
    orders: Tuple[int, ...]
    boundary: Tuple[BoundaryComponent, ...] = ()

    @classmethod
    def build(cls, frame: Frame, generators: Iterable[Polynomial],
              boundary: Iterable[BoundaryComponent] = ()) -> "Label":
        generators = tuple(generators)
        boundary = tuple(boundary)
        if not generators:
            raise BadParameters("a label needs at least one generator")
        orders = []
        for i, f in enumerate(generators, start=1):
            if f.frame != frame:
                raise FrameMismatch(f"generator f{i} lives in {f.frame.describe()}")
            n = order_mod_u(f)
            if n == math.inf or n == 0:
                raise BadParameters(f"generator f{i} = {f} has order mod u {n}; need 1 <= n < inf")
            orders.append(n)
        for comp in boundary:
            if comp.generator.frame != frame:
                raise FrameMismatch(f"boundary {comp.ident} lives in {comp.generator.frame.describe()}")
        return cls(frame, generators, tuple(orders), boundary)

    @property
    def e(self) -> int:
        return self.frame.e

    @property
    def r(self) -> int:
        return self.frame.r

    @property
    def field(self) -> Field:
        return self.frame.field

    @property
    def n_max(self) -> int:
        return max(self.orders)

    def with_generators(self, generators: Iterable[Polynomial]) -> "Label":
        return Label.build(self.frame, generators, self.boundary)

    def old_boundary(self) -> Tuple[BoundaryComponent, ...]:
        return tuple(c for c in self.boundary if c.old)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": self.field.to_dict(),
            "y": list(self.frame.y_names),
            "u": list(self.frame.u_names),
            "generators": [f.to_dict() for f in self.generators],
            "orders": list(self.orders),
            "boundary": [c.to_dict() for c in self.boundary],
        }


def contributed_points(f: Polynomial, n, s: Optional[int] = None) -> List[Tuple[Fraction, ...]]:
    """Points A/(n - |B|) of the terms with |B| < n, truncated to the first s coordinates."""
    points = []
    for ex in f.terms:
        weight = n - sum(ex.B)
        if weight > 0:
            A = ex.A if s is None else ex.A[:s]
            points.append(tuple(Fraction(a, weight) for a in A))
    return points


def _generic_order(f: Polynomial, s: int):
    """Order mod (u_1..u_s) with the remaining u treated as units."""
    orders = [sum(ex.B) for ex in f.terms if not any(ex.A[:s])]
    return min(orders) if orders else math.inf


def char_polyhedron(label: Label, s: Optional[int] = None) -> FSubset:
    """
    Delta(f, y, u), or Delta(f, y, u_{<=s}) at the generic point of {y = u_1 = ... = u_s = 0}.

    Args:
        label (Label): the label
        s (int): optional number of leading u-parameters to keep

    Returns:
        FSubset: the characteristic polyhedron
    """
    if s is None:
        points = []
        for f, n in zip(label.generators, label.orders):
            points.extend(contributed_points(f, n))
        return minimal_fsubset(points, dim=label.e)
    if not 1 <= s <= label.e:
        raise BadIndex(f"generic point index {s} outside 1..{label.e}")
    points = []
    for f in label.generators:
        points.extend(contributed_points(f, _generic_order(f, s), s))
    return minimal_fsubset(points, dim=s)


def essential_points(label: Label) -> List[Tuple[Fraction, ...]]:
    """Contributed points on the essential boundary of Delta, sorted."""
    delta = char_polyhedron(label)
    found = set()
    for f, n in zip(label.generators, label.orders):
        for q in contributed_points(f, n):
            if delta.on_boundary(q):
                found.add(q)
    return sorted(found)


def boundary_polyhedron(label: Label) -> FSubset:
    """Delta^O: the polyhedron of f extended by the old boundary generators."""
    points = []
    for f, n in zip(label.generators, label.orders):
        points.extend(contributed_points(f, n))
    for comp in label.old_boundary():
        n = order_mod_u(comp.generator)
        if n == math.inf:
            raise BoundaryInUIdeal(f"old boundary {comp.ident} = {comp.generator} lies in <u>")
        points.extend(contributed_points(comp.generator, n))
    return minimal_fsubset(points, dim=label.e)


# --- nu* --------------------------------------------------------------------

@dataclass(frozen=True)
class NuStar:
    """(nu_1 <= ... <= nu_m, inf, inf, ...)."""

    degrees: Tuple[int, ...]

    def to_list(self) -> List[Union[int, str]]:
        return list(self.degrees) + ["inf"]

    def __str__(self) -> str:
        return "(" + ", ".join(str(d) for d in self.to_list()) + ")"


def _flat(f: Polynomial) -> Dict[Tuple[int, ...], Any]:
    return {ex.B + ex.A: c for ex, c in f.terms.items()}


def _shifted(vec: Dict[Tuple[int, ...], Any], mono: Tuple[int, ...]) -> Dict[Tuple[int, ...], Any]:
    return {tuple(a + b for a, b in zip(col, mono)): c for col, c in vec.items()}


def nu_star(forms: Sequence[Polynomial]) -> NuStar:
    """
    Degrees of a greedy minimal generating sequence of the homogeneous ideal.

    Args:
        forms (Sequence[Polynomial]): homogeneous generators

    Returns:
        NuStar: the nu*-sequence
    """
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        return NuStar(())
    frame = forms[0].frame
    nvars = frame.r + frame.e
    for f in forms:
        if not f.is_homogeneous():
            raise BadParameters(f"nu* needs homogeneous forms: {f}")
    degrees = sorted({int(f.multiplicity()) for f in forms})
    chosen: List[Tuple[int, Dict]] = []
    picks: List[int] = []
    for d in degrees:
        span_i = Echelon(frame.field)
        span_j = Echelon(frame.field)
        for f in forms:
            deg = int(f.multiplicity())
            if deg > d:
                continue
            for mono in monomial_exponents(nvars, d - deg):
                span_i.insert(_shifted(_flat(f), mono))
        for deg, vec in chosen:
            for mono in monomial_exponents(nvars, d - deg):
                span_j.insert(_shifted(vec, mono))
        new = span_i.rank - span_j.rank
        logger.debug(f"nu*: degree {d} adds {new} generators")
        for f in forms:
            if new == 0:
                break
            if int(f.multiplicity()) == d and not span_j.contains(_flat(f)):
                span_j.insert(_flat(f))
                chosen.append((d, _flat(f)))
                picks.append(d)
                new -= 1
    return NuStar(tuple(picks))


# --- directrix ----------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Span of linear forms in the frame variables, stored as a reduced basis."""

    frame: Frame
    basis: Tuple[Tuple[Any, ...], ...]

    @classmethod
    def spanned_by(cls, frame: Frame, vectors: Iterable[Sequence[Any]]) -> "Subspace":
        field = frame.field
        nvars = frame.r + frame.e
        ech = Echelon(field)
        for vec in vectors:
            ech.insert({j: c for j, c in enumerate(vec) if not field.is_zero(c)})
        rows = []
        for col in sorted(ech.pivots):
            row, _ = ech.pivots[col]
            rows.append(tuple(row.get(j, field.zero) for j in range(nvars)))
        return cls(frame, tuple(rows))

    @classmethod
    def of_variables(cls, frame: Frame, names: Iterable[str]) -> "Subspace":
        field = frame.field
        all_names = frame.names
        vectors = []
        for name in names:
            vectors.append(tuple(field.one if n == name else field.zero for n in all_names))
        return cls.spanned_by(frame, vectors)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def forms(self) -> List[Polynomial]:
        frame = self.frame
        result = []
        for row in self.basis:
            form = Polynomial.zero(frame)
            for name, c in zip(frame.names, row):
                form = form + Polynomial.variable(frame, name).scale(c)
            result.append(form)
        return result

    def to_list(self) -> List[str]:
        return [str(f) for f in self.forms()]


def _derivative_rows(F: Polynomial) -> List[Dict[int, Any]]:
    """Rows of the linear system sum_j w_j dF/dX_j = 0, one per monomial."""
    field = F.field
    rows: Dict[Tuple[int, ...], Dict[int, Any]] = {}
    for ex, c in F.terms.items():
        exps = ex.B + ex.A
        for j, k in enumerate(exps):
            if k == 0:
                continue
            coeff = field.mul(field.from_int(k), c)
            if field.is_zero(coeff):
                continue
            mono = exps[:j] + (k - 1,) + exps[j + 1:]
            row = rows.setdefault(mono, {})
            updated = field.add(row.get(j, field.zero), coeff)
            if field.is_zero(updated):
                row.pop(j, None)
            else:
                row[j] = updated
    return [row for row in rows.values() if row]


def _translation_invariant(F: Polynomial, w: Sequence[Any]) -> bool:
    """F(X + t w) == F(X) as polynomials in X and t."""
    frame = F.frame
    augmented = Frame(frame.y_names, frame.u_names + ("_t",), frame.field)
    lift = F.map_monomials(lambda ex: ExponentPair(ex.B, ex.A + (0,)), frame=augmented)
    t = Polynomial.variable(augmented, "_t")
    mapping = {}
    for name, c in zip(frame.names, w):
        if not frame.field.is_zero(c):
            mapping[name] = Polynomial.variable(augmented, name) + t.scale(c)
    if not mapping:
        return True
    return substitute(lift, mapping) == lift


def directrix(forms: Union[Polynomial, Sequence[Polynomial]]) -> Subspace:
    """
    Smallest subspace T of linear forms with every F in k[T].

    Args:
        forms: one homogeneous form or a list of them

    Returns:
        Subspace: the directrix

    Raises:
        UnsupportedField: in characteristic p when the candidate translations are too many
    """
    if isinstance(forms, Polynomial):
        forms = [forms]
    forms = [F for F in forms if not F.is_zero()]
    if not forms:
        raise BadParameters("directrix of the zero ideal")
    frame = forms[0].frame
    field = frame.field
    nvars = frame.r + frame.e
    rows = []
    for F in forms:
        rows.extend(_derivative_rows(F))
    kernel = nullspace(rows, field, nvars)

    if field.characteristic == 0:
        invariant = kernel
    else:
        count = field.size ** len(kernel)
        if count > DIRECTRIX_CONFIG["max_candidates"]:
            raise UnsupportedField(
                f"directrix search over {count} translations exceeds {DIRECTRIX_CONFIG['max_candidates']}")
        logger.debug(f"directrix: testing {count} translations")
        invariant = []
        elements = list(field.elements())
        for coeffs in itertools.product(elements, repeat=len(kernel)):
            w = [field.zero] * nvars
            for c, vec in zip(coeffs, kernel):
                for j, value in vec.items():
                    w[j] = field.add(w[j], field.mul(c, value))
            if all(field.is_zero(x) for x in w):
                continue
            if all(_translation_invariant(F, w) for F in forms):
                invariant.append({j: x for j, x in enumerate(w) if not field.is_zero(x)})

    complement = nullspace(invariant, field, nvars)
    return Subspace.spanned_by(frame, [tuple(vec.get(j, field.zero) for j in range(nvars))
                                       for vec in complement])


def tangent_forms(label: Label) -> List[Polynomial]:
    """in_m(f_i): the lowest-degree homogeneous parts."""
    return [f.homogeneous_part(int(f.multiplicity())) for f in label.generators]


def check_strictly_admissible(label: Label) -> bool:
    """True iff the directrix of the tangent forms is exactly <Y_1, ..., Y_r>."""
    target = Subspace.of_variables(label.frame, label.frame.y_names)
    found = directrix(tangent_forms(label))
    logger.debug(f"directrix {found.to_list()} vs {target.to_list()}")
    return found.basis == target.basis


@dataclass(frozen=True)
class DeltaCriteria:
    delta_ge_1: bool
    delta_gt_1: bool
    delta_eq_1: bool
    delta: Any

    def to_dict(self) -> Dict[str, Any]:
        return {"delta_ge_1": self.delta_ge_1, "delta_gt_1": self.delta_gt_1,
                "delta_eq_1": self.delta_eq_1, "delta": fraction_text(self.delta)}


def delta_criteria(label: Label) -> DeltaCriteria:
    """
    Decide delta >= 1, > 1 and = 1 from multiplicities and tangent forms.

    The flags are cross-checked against delta(Delta) from the polyhedron.
    """
    ge_1 = all(f.multiplicity() == n for f, n in zip(label.generators, label.orders))
    gt_1 = ge_1 and all(
        f.homogeneous_part(n) == initial_form(f, Selector.zero())
        for f, n in zip(label.generators, label.orders)
    )
    delta = delta_value(char_polyhedron(label))
    if ge_1 != (delta >= 1) or gt_1 != (delta > 1):
        raise InvariantViolation(f"delta criteria disagree with delta = {fraction_text(delta)}")
    return DeltaCriteria(ge_1, gt_1, ge_1 and not gt_1, delta)
