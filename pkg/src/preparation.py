"""
Vertex Preparation

Normalization, solvability and dissolution at vertices of the characteristic
polyhedron, and the loop that prepares every vertex in a box |v| <= M.

A label is prepared at a vertex v when it is normalized there (no term of
in_v(f_i)^+ has a y-exponent in E(in_0(f_1), ..., in_0(f_{i-1}))) and no
translation y -> y + c u^v removes v.
"""

import itertools
import logging
import math
import os
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

from config.config import PREPARATION_CONFIG, SOLVER_CONFIG
from src.algebra import ExponentPair, Polynomial, Selector, initial_form, monomial_exponents, substitute
from src.charpoly import BoundaryComponent, Label, char_polyhedron
from src.errors import (
    InvariantViolation,
    NonTermination,
    NotAVertex,
    NotWeaklyNormalized,
    UnboundedFace,
)
from src.linalg import Echelon, solve_affine
from src.polyhedron import Face, fraction_text

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]


def _lex_desc_key(B: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(-b for b in B)


def _y_vector(F: Polynomial) -> Dict[Tuple[int, ...], Any]:
    return {ex.B: c for ex, c in F.terms.items()}


@dataclass
class ExponentSet:
    """
    E(F_1, ..., F_m): lex-leading y-exponents of the homogeneous ideal, up to max_degree.

    The per-degree echelon forms are kept so that leading_combination() can
    produce witnesses for membership.
    """

    r: int
    max_degree: int
    generators: List[Tuple[int, ...]]
    slices: Dict[int, Echelon] = dc_field(default_factory=dict, repr=False)

    def contains(self, B: Sequence[int]) -> bool:
        return any(all(g <= b for g, b in zip(gen, B)) for gen in self.generators)

    def leading_combination(self, B: Tuple[int, ...]) -> Dict[int, Dict[Tuple[int, ...], Any]]:
        """
        G with Y^B - sum G_i F_i lex-smaller than Y^B.

        Returns:
            Dict[int, Dict]: generator index -> y-monomial multiplier -> coefficient
        """
        ech = self.slices.get(sum(B))
        if ech is None or B not in ech.pivots:
            raise KeyError(f"{B} is not a leading exponent")
        _, combo = ech.pivots[B]
        result: Dict[int, Dict[Tuple[int, ...], Any]] = {}
        for (i, C), c in combo.items():
            result.setdefault(i, {})[C] = c
        return result


def leading_exponent_set(forms: Sequence[Polynomial], max_degree: Optional[int] = None) -> ExponentSet:
    """
    Leading exponent set of the ideal generated by homogeneous forms in Y.

    Args:
        forms (Sequence[Polynomial]): forms in k[Y] (no u-exponents)
        max_degree (int): highest degree computed (default: the largest input degree)

    Returns:
        ExponentSet: minimal generators and the per-degree echelon forms
    """
    forms = [F for F in forms if not F.is_zero()]
    if not forms:
        return ExponentSet(0, max_degree or 0, [])
    r = forms[0].frame.r
    field = forms[0].field
    degrees = [sum(next(iter(F.terms)).B) for F in forms]
    if max_degree is None:
        max_degree = max(degrees)
    generators: List[Tuple[int, ...]] = []
    slices: Dict[int, Echelon] = {}
    for d in range(min(degrees), max_degree + 1):
        ech = Echelon(field, key=_lex_desc_key)
        for i, (F, deg) in enumerate(zip(forms, degrees)):
            if deg > d:
                continue
            vec = _y_vector(F)
            for C in monomial_exponents(r, d - deg):
                shifted = {tuple(a + b for a, b in zip(B, C)): c for B, c in vec.items()}
                ech.insert(shifted, {(i, C): field.one})
        slices[d] = ech
        for B in sorted(ech.pivots, reverse=True):
            if not any(all(g <= b for g, b in zip(gen, B)) for gen in generators):
                generators.append(B)
    return ExponentSet(r, max_degree, sorted(generators, reverse=True), slices)


def in_zero_forms(label: Label) -> List[Polynomial]:
    return [initial_form(f, Selector.zero()) for f in label.generators]


def is_weakly_normalized(label: Label) -> bool:
    """in_0(f_i) is not in the ideal of in_0(f_1), ..., in_0(f_{i-1})."""
    forms = in_zero_forms(label)
    for i in range(1, len(forms)):
        eset = leading_exponent_set(forms[:i], max_degree=label.orders[i])
        ech = eset.slices.get(label.orders[i])
        if ech is not None and ech.contains(_y_vector(forms[i])):
            return False
    return True


def _exponent_sets(label: Label) -> List[ExponentSet]:
    forms = in_zero_forms(label)
    sets = []
    for i, n in enumerate(label.orders):
        sets.append(leading_exponent_set(forms[:i], max_degree=max(n - 1, 0)))
    return sets


def _on_vertex(ex: ExponentPair, n: int, v: Point) -> bool:
    weight = n - sum(ex.B)
    return weight > 0 and all(a == weight * x for a, x in zip(ex.A, v))


def _on_face(ex: ExponentPair, n: int, face: Face) -> bool:
    weight = n - sum(ex.B)
    return weight > 0 and face.form(ex.A) == face.level * weight


def _offenders(f: Polynomial, n: int, eset: ExponentSet, on_target) -> List[ExponentPair]:
    return [ex for ex in f.terms if on_target(ex, n) and eset.contains(ex.B)]


def is_normalized_at(label: Label, v: Sequence) -> bool:
    """No term of in_v(f_i)^+ has its y-exponent in E(in_0(f_1), ..., in_0(f_{i-1}))."""
    v = tuple(Fraction(x) for x in v)
    sets = _exponent_sets(label)
    for f, n, eset in zip(label.generators, label.orders, sets):
        if _offenders(f, n, eset, lambda ex, n: _on_vertex(ex, n, v)):
            return False
    return True


def _eliminate(label: Label, on_target, cap: int) -> Label:
    """
    Remove offending terms generator by generator.

    The offending term with the largest (|B|, B) is cleared first. Every term
    the elimination creates on the target is smaller in that order, so each
    generator needs finitely many passes; more than `cap` of them is an error.
    """
    if not is_weakly_normalized(label):
        raise NotWeaklyNormalized("normalization needs a weakly normalized label")
    frame = label.frame
    field = label.field
    sets = _exponent_sets(label)
    generators = list(label.generators)
    for j in range(1, len(generators)):
        n = label.orders[j]
        eset = sets[j]
        passes = 0
        while True:
            offenders = _offenders(generators[j], n, eset, on_target)
            if not offenders:
                break
            passes += 1
            if passes > cap:
                raise NonTermination(f"normalization of f{j + 1} exceeded {cap} eliminations")
            ex = max(offenders, key=lambda e: (sum(e.B), e.B))
            c = generators[j].terms[ex]
            correction = Polynomial.zero(frame)
            for i, multipliers in eset.leading_combination(ex.B).items():
                G = Polynomial(frame, {ExponentPair(C, (0,) * frame.e): g for C, g in multipliers.items()})
                correction = correction + G * generators[i]
            shift = Polynomial.monomial(frame, (0,) * frame.r, ex.A, c)
            generators[j] = generators[j] - shift * correction
            logger.debug(f"normalization: f{j + 1} cleared y^{ex.B} u^{ex.A}")
        if passes:
            logger.info(f"normalized f{j + 1} in {passes} eliminations")
    out = label.with_generators(generators)
    if out.orders != label.orders:
        raise InvariantViolation("normalization changed the orders n_i")
    return out


def normalize_at(label: Label, v: Sequence) -> Label:
    """
    Normalize the label at the point v.

    Args:
        label (Label): weakly normalized label
        v (Sequence): a point outside Delta^+

    Returns:
        Label: h with h_i = f_i - sum_{j<i} x_ij f_j, x_ij in <u>
    """
    v = tuple(Fraction(x) for x in v)
    return _eliminate(label, lambda ex, n: _on_vertex(ex, n, v), step_cap(label, sum(v)))


def normalize_along_face(label: Label, face: Face) -> Label:
    """Normalize the label along a bounded face of its polyhedron."""
    if not face.bounded:
        raise UnboundedFace("normalization along an unbounded face")
    bound = max((sum(v) for v in face.vertices), default=face.level)
    return _eliminate(label, lambda ex, n: _on_face(ex, n, face), step_cap(label, bound))


# --- solvability ------------------------------------------------------------

class Solvability(Enum):
    SOLVABLE = "solvable"
    NOT_SOLVABLE = "not-solvable"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Solution:
    """Translation y_j -> y_j + c_j u^v removing the vertex v."""

    vertex: Tuple[int, ...]
    lambdas: Tuple[Any, ...]


@dataclass(frozen=True)
class SolveResult:
    status: Solvability
    solution: Optional[Solution] = None
    reason: str = ""


def _translate(label: Label, vertex: Tuple[int, ...], coeffs: Sequence[Any], sign: int = 1) -> Dict[str, Polynomial]:
    frame = label.frame
    field = label.field
    mapping = {}
    for name, c in zip(frame.y_names, coeffs):
        if field.is_zero(c):
            continue
        shift = Polynomial.monomial(frame, (0,) * frame.r, vertex, c if sign > 0 else field.neg(c))
        mapping[name] = Polynomial.variable(frame, name) + shift
    return mapping


def _verifies(label: Label, vertex: Tuple[int, ...], coeffs: Sequence[Any]) -> bool:
    """in_v(f_i) == in_0(f_i)(Y + c U^v) for every generator."""
    mapping = _translate(label, vertex, coeffs)
    point = tuple(Fraction(a) for a in vertex)
    for f in label.generators:
        expected = initial_form(f, Selector.at_vertex(point))
        if substitute(initial_form(f, Selector.zero()), mapping) != expected:
            return False
    return True


def _linear_rows(label: Label, vertex: Tuple[int, ...]) -> List[Tuple[Dict[int, Any], Any]]:
    """Equations sum_j c_j dF_i/dY_j = coefficient of y^C u^v in f_i, for |C| = n_i - 1."""
    field = label.field
    rows = []
    for f, n in zip(label.generators, label.orders):
        F = initial_form(f, Selector.zero())
        by_monomial: Dict[Tuple[int, ...], Dict[int, Any]] = {}
        for ex, c in F.terms.items():
            for j, k in enumerate(ex.B):
                if k == 0:
                    continue
                coeff = field.mul(field.from_int(k), c)
                C = ex.B[:j] + (k - 1,) + ex.B[j + 1:]
                row = by_monomial.setdefault(C, {})
                row[j] = field.add(row.get(j, field.zero), coeff)
        for C in monomial_exponents(label.r, n - 1):
            row = {j: x for j, x in by_monomial.get(C, {}).items() if not field.is_zero(x)}
            rhs = f.coefficient(C, vertex)
            rows.append((row, rhs))
    return rows


def _pure_power_candidate(label: Label, vertex: Tuple[int, ...]) -> Optional[Any]:
    """For r = 1 and F = gamma Y^n with p | n: read c from the Frobenius expansion."""
    field = label.field
    p = field.characteristic
    f, n = label.generators[0], label.orders[0]
    gamma = f.coefficient((n,), (0,) * label.e)
    s, m = 0, n
    while p and m % p == 0:
        s += 1
        m //= p
    q = p ** s
    # gamma (Y^q + c^q U^{qv})^m
    if m > 1:
        target = f.coefficient((n - q,), tuple(q * a for a in vertex))
        c_power = field.div(target, field.mul(gamma, field.from_int(m)))
    else:
        target = f.coefficient((0,), tuple(n * a for a in vertex))
        c_power = field.div(target, gamma)
    c = c_power
    for _ in range(s):
        c = field.pth_root(c)
    return c


def solvable_at(label: Label, v: Sequence) -> SolveResult:
    """
    Decide whether a vertex can be removed by a translation y -> y + c u^v.

    Args:
        label (Label): the label
        v (Sequence): a vertex of char_polyhedron(label)

    Returns:
        SolveResult: solvable with its Solution, not solvable, or undecided
    """
    v = tuple(Fraction(x) for x in v)
    delta = char_polyhedron(label)
    if v not in delta.vertices:
        raise NotAVertex(f"{tuple(fraction_text(x) for x in v)} is not a vertex of {delta}")
    if any(x.denominator != 1 for x in v):
        return SolveResult(Solvability.NOT_SOLVABLE, reason="non-integral vertex")
    vertex = tuple(int(x) for x in v)
    field = label.field

    particular, kernel = solve_affine(_linear_rows(label, vertex), field, label.r)
    if particular is None:
        return SolveResult(Solvability.NOT_SOLVABLE, reason="linear part inconsistent")

    def candidate(vec: Dict[int, Any]) -> Tuple[Any, ...]:
        return tuple(vec.get(j, field.zero) for j in range(label.r))

    if not kernel:
        coeffs = candidate(particular)
        if _verifies(label, vertex, coeffs):
            return SolveResult(Solvability.SOLVABLE, Solution(vertex, coeffs))
        return SolveResult(Solvability.NOT_SOLVABLE, reason="unique linear solution fails")

    if label.r == 1 and field.characteristic > 0:
        c = _pure_power_candidate(label, vertex)
        if c is not None and _verifies(label, vertex, (c,)):
            return SolveResult(Solvability.SOLVABLE, Solution(vertex, (c,)))
        return SolveResult(Solvability.NOT_SOLVABLE, reason="Frobenius candidate fails")

    if field.size is not None and field.size ** len(kernel) <= SOLVER_CONFIG["max_search"]:
        for scalars in itertools.product(list(field.elements()), repeat=len(kernel)):
            vec = dict(particular)
            for s, basis in zip(scalars, kernel):
                for j, x in basis.items():
                    vec[j] = field.add(vec.get(j, field.zero), field.mul(s, x))
            coeffs = candidate(vec)
            if _verifies(label, vertex, coeffs):
                return SolveResult(Solvability.SOLVABLE, Solution(vertex, coeffs))
        return SolveResult(Solvability.NOT_SOLVABLE, reason="exhaustive search")

    return SolveResult(Solvability.UNDECIDED, reason=f"{len(kernel)}-dimensional family of candidates")


def dissolve_at(label: Label, solution: Solution) -> Label:
    """
    Change coordinates z = y + c u^v; variable names are kept.

    Generators and boundary components are rewritten by y -> y - c u^v.
    """
    mapping = _translate(label, solution.vertex, solution.lambdas, sign=-1)
    generators = [substitute(f, mapping) for f in label.generators]
    boundary = [BoundaryComponent(c.ident, substitute(c.generator, mapping), c.old) for c in label.boundary]
    out = Label.build(label.frame, generators, boundary)
    if out.orders != label.orders:
        raise InvariantViolation("dissolution changed the orders n_i")
    logger.info(f"dissolved vertex {solution.vertex} with lambda "
                f"{[label.field.to_str(c) for c in solution.lambdas]}")
    return out


# --- preparation loop ---------------------------------------------------------

@dataclass(frozen=True)
class PrepStep:
    vertex: Point
    action: str
    lambdas: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        data = {"vertex": [fraction_text(x) for x in self.vertex], "action": self.action}
        if self.lambdas:
            data["lambda"] = list(self.lambdas)
        return data


@dataclass
class PrepReport:
    steps: List[PrepStep] = dc_field(default_factory=list)
    label: Optional[Label] = None

    @property
    def undecided(self) -> List[Point]:
        return [s.vertex for s in self.steps if s.action == "undecided"]

    @property
    def dissolutions(self) -> int:
        return sum(1 for s in self.steps if s.action == "dissolved")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "steps": [s.to_dict() for s in self.steps],
            "undecided": [[fraction_text(x) for x in v] for v in self.undecided],
        }


def step_cap(label: Label, M) -> int:
    """10 * number of points of (1/n_N!)Z^e in [0, M]^e, unless overridden by the environment."""
    override = os.getenv(PREPARATION_CONFIG["step_cap_env"])
    if override:
        return int(override)
    per_axis = math.floor(Fraction(M) * math.factorial(label.n_max)) + 1
    return PREPARATION_CONFIG["step_cap_factor"] * per_axis ** label.e


def prepare(label: Label, M) -> Tuple[Label, PrepReport]:
    """
    Prepare every vertex v with |v| <= M, smallest (|v|, lex) first.

    Args:
        label (Label): weakly normalized label
        M: bound on |v|

    Returns:
        Tuple[Label, PrepReport]: the prepared label and what was done per vertex
    """
    M = Fraction(M)
    cap = step_cap(label, M)
    report = PrepReport()
    settled: Set[Point] = set()
    steps = 0
    while True:
        delta = char_polyhedron(label)
        todo = [v for v in delta.vertices if sum(v) <= M and v not in settled]
        if not todo:
            break
        v = min(todo, key=lambda q: (sum(q), q))
        steps += 1
        if steps > cap:
            raise NonTermination(f"preparation exceeded {cap} steps at vertex "
                                 f"{tuple(fraction_text(x) for x in v)}")
        if not is_normalized_at(label, v):
            label = normalize_at(label, v)
            report.steps.append(PrepStep(v, "normalized"))
            continue
        result = solvable_at(label, v)
        if result.status is Solvability.SOLVABLE:
            label = dissolve_at(label, result.solution)
            report.steps.append(PrepStep(v, "dissolved",
                                         tuple(label.field.to_str(c) for c in result.solution.lambdas)))
        elif result.status is Solvability.NOT_SOLVABLE:
            settled.add(v)
            report.steps.append(PrepStep(v, "already-prepared"))
        else:
            settled.add(v)
            logger.warning(f"solvability undecided at {tuple(fraction_text(x) for x in v)}: {result.reason}")
            report.steps.append(PrepStep(v, "undecided"))
    report.label = label
    return label, report


def is_prepared_at(label: Label, v: Sequence) -> bool:
    """Normalized at v and not solvable there."""
    return is_normalized_at(label, v) and solvable_at(label, v).status is Solvability.NOT_SOLVABLE


def is_prepared_along(label: Label, face: Face) -> bool:
    """Prepared at every vertex of the face."""
    return all(is_prepared_at(label, v) for v in face.vertices)
