"""
F-subsets of the positive orthant

An F-subset is a closed convex subset of R^e_{>=0} stable under adding the
orthant. Polyhedral F-subsets are stored by their vertex list (V-representation)
with exact rational coordinates. Dimension 1 and 2 are handled by direct
scans; dimension >= 3 uses an exact simplex from sympy for the few
domination tests it needs.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
from sympy.solvers.simplex import InfeasibleLPError, lpmax, lpmin

from src.algebra import LinearForm, Point
from src.errors import BadIndex, EmptyPolyhedron, InvariantViolation, NegativeCoordinate, WrongDimension

logger = logging.getLogger(__name__)


def fraction_text(x) -> str:
    """Exact text of an extended rational: '14/3', '5', 'inf'."""
    if x == math.inf:
        return "inf"
    return str(Fraction(x))


def as_point(coords: Iterable) -> Point:
    return tuple(Fraction(c) for c in coords)


def _dominates(a: Point, b: Point) -> bool:
    """a <= b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def _pareto(points: Iterable[Point]) -> List[Point]:
    unique = sorted(set(points))
    return [q for q in unique if not any(o != q and _dominates(o, q) for o in unique)]


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _sym(x: Fraction) -> sympy.Rational:
    return sympy.Rational(x.numerator, x.denominator)


def _hull_constraints(generators: Sequence[Point], bound: Point, skip: Optional[int] = None):
    """Constraints sum lam_i g_i <= bound (except coordinate `skip`), lam in the simplex."""
    lams = sympy.symbols(f"lam0:{len(generators)}")
    constraints = [sympy.Eq(sympy.Add(*lams), 1)] + [lam >= 0 for lam in lams]
    for j in range(len(bound)):
        if j == skip:
            continue
        combo = sympy.Add(*[_sym(g[j]) * lam for g, lam in zip(generators, lams)])
        constraints.append(combo <= _sym(bound[j]))
    return lams, constraints


def _solve(lams, objective, constraints, minimize: bool = False):
    """
    Optimum of a linear objective over the constraints, None when infeasible.

    Constraints with constant sides come out of sympy as booleans; the simplex
    must only see the relational ones.
    """
    relations = []
    for c in constraints:
        if c is sympy.true:
            continue
        if c is sympy.false:
            return None
        relations.append(c)
    target = objective if objective.free_symbols else lams[0]
    try:
        _, solution = (lpmin if minimize else lpmax)(target, relations)
    except InfeasibleLPError:
        return None
    if not all(c.subs(solution) is sympy.true for c in relations):
        raise InvariantViolation(f"simplex returned {solution}, which violates its constraints")
    return objective.subs(solution) if objective.free_symbols else objective


def _in_hull_plus_orthant(q: Point, generators: Sequence[Point]) -> bool:
    if not generators:
        return False
    if any(_dominates(g, q) for g in generators):
        return True
    lams, constraints = _hull_constraints(generators, q)
    return _solve(lams, lams[0], constraints) is not None


@dataclass(frozen=True)
class FSubset:
    """
    conv(vertices) + R^e_{>=0}, stored by its extreme vertices sorted lexicographically.

    Use minimal_fsubset() to build one; the constructor trusts its input.
    """

    dim: int
    vertices: Tuple[Point, ...]

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, q: Sequence) -> bool:
        """Membership of a point in the represented set."""
        q = as_point(q)
        if self.is_empty:
            return False
        if self.dim == 1:
            return q[0] >= self.vertices[0][0]
        if self.dim == 2:
            chain = self.vertices
            if q[0] < chain[0][0] or q[1] < chain[-1][1]:
                return False
            for a, b in zip(chain, chain[1:]):
                # edge normal (a2 - b2, b1 - a1) points into the set
                if (a[1] - b[1]) * (q[0] - a[0]) + (b[0] - a[0]) * (q[1] - a[1]) < 0:
                    return False
            return True
        return _in_hull_plus_orthant(q, self.vertices)

    def issubset(self, other: "FSubset") -> bool:
        return all(other.contains(v) for v in self.vertices)

    def on_boundary(self, q: Sequence) -> bool:
        """q lies in the essential boundary: q in the set and nothing below it is."""
        q = as_point(q)
        if not self.contains(q):
            return False
        if self.dim == 1:
            return q[0] == self.vertices[0][0]
        if self.dim == 2:
            # only the compact edges are Pareto-minimal, not the two rays
            chain = self.vertices
            if q in chain:
                return True
            for a, b in zip(chain, chain[1:]):
                on_line = (a[1] - b[1]) * (q[0] - a[0]) + (b[0] - a[0]) * (q[1] - a[1]) == 0
                if on_line and a[0] <= q[0] <= b[0]:
                    return True
            return False
        for i in range(self.dim):
            if q[i] == 0:
                continue
            lams, constraints = _hull_constraints(self.vertices, q, skip=i)
            objective = sympy.Add(*[_sym(v[i]) * lam for v, lam in zip(self.vertices, lams)])
            lowest = _solve(lams, objective, constraints, minimize=True)
            if lowest is not None and lowest < _sym(q[i]):
                return False
        return True

    def interior_plus(self, q: Sequence) -> bool:
        """q lies in Delta^+ = Delta minus its essential boundary."""
        return self.contains(q) and not self.on_boundary(q)

    def to_dict(self) -> Dict[str, Any]:
        return {"dim": self.dim, "vertices": [[fraction_text(x) for x in v] for v in self.vertices]}

    def __str__(self) -> str:
        if self.is_empty:
            return "<empty>"
        return "<" + ", ".join("(" + ",".join(fraction_text(x) for x in v) + ")" for v in self.vertices) + ">"


def minimal_fsubset(points: Iterable[Sequence], dim: Optional[int] = None) -> FSubset:
    """
    The smallest F-subset containing the given points.

    Args:
        points (Iterable[Sequence]): points of Q^e_{>=0}
        dim (int): ambient dimension, needed when `points` is empty

    Returns:
        FSubset: the polyhedron with its unique minimal vertex list
    """
    pts = [as_point(p) for p in points]
    if dim is None:
        if not pts:
            raise WrongDimension("dimension of an empty point set is unknown")
        dim = len(pts[0])
    for q in pts:
        if len(q) != dim:
            raise WrongDimension(f"point {q} does not have dimension {dim}")
        if any(x < 0 for x in q):
            raise NegativeCoordinate(f"negative coordinate in {tuple(fraction_text(x) for x in q)}")
    if not pts:
        return FSubset(dim, ())

    candidates = _pareto(pts)
    if dim == 1:
        vertices = candidates[:1]
    elif dim == 2:
        # candidates sorted by a1 ascending, hence a2 strictly descending
        hull: List[Point] = []
        for q in candidates:
            while len(hull) >= 2 and _cross(hull[-2], hull[-1], q) <= 0:
                hull.pop()
            hull.append(q)
        vertices = hull
    else:
        vertices = [q for i, q in enumerate(candidates)
                    if not _in_hull_plus_orthant(q, candidates[:i] + candidates[i + 1:])]
    return FSubset(dim, tuple(sorted(vertices)))


@dataclass(frozen=True)
class Face:
    """Vertices of Delta where L attains its minimum `level`."""

    form: LinearForm
    level: Fraction
    vertices: Tuple[Point, ...]
    bounded: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "form": [fraction_text(c) for c in self.form.coefficients],
            "level": fraction_text(self.level),
            "vertices": [[fraction_text(x) for x in v] for v in self.vertices],
            "bounded": self.bounded,
        }


def delta_face(delta: FSubset, form: Optional[LinearForm] = None) -> Tuple[Fraction, Face]:
    """
    Minimum of L over Delta and the face where it is attained (L defaults to L_0).

    Raises:
        EmptyPolyhedron: for the empty F-subset
    """
    if delta.is_empty:
        raise EmptyPolyhedron("delta face of the empty polyhedron")
    form = form or LinearForm.standard(delta.dim)
    level = min(form(v) for v in delta.vertices)
    face_vertices = tuple(v for v in delta.vertices if form(v) == level)
    return level, Face(form, level, face_vertices, form.positive)


def delta_value(delta: FSubset):
    """delta(Delta), inf for the empty set."""
    if delta.is_empty:
        return math.inf
    return delta_face(delta)[0]


@dataclass(frozen=True)
class Invariants2:
    """The invariants of a two-dimensional F-subset."""

    alpha: Fraction
    beta: Fraction
    delta: Fraction
    gamma_plus: Fraction
    gamma_minus: Fraction
    epsilon: Fraction
    zeta: Fraction

    @property
    def v(self) -> Point:
        return (self.alpha, self.beta)

    @property
    def w_plus(self) -> Point:
        return (self.delta - self.gamma_plus, self.gamma_plus)

    @property
    def w_minus(self) -> Point:
        return (self.delta - self.gamma_minus, self.gamma_minus)

    def to_dict(self) -> Dict[str, Any]:
        data = {name: fraction_text(getattr(self, name))
                for name in ("alpha", "beta", "delta", "gamma_plus", "gamma_minus", "epsilon", "zeta")}
        data["v"] = [fraction_text(x) for x in self.v]
        data["w_plus"] = [fraction_text(x) for x in self.w_plus]
        data["w_minus"] = [fraction_text(x) for x in self.w_minus]
        return data


def invariants2(delta: FSubset) -> Invariants2:
    """
    alpha, beta, delta, gamma+-, epsilon and zeta of a plane F-subset.

    Args:
        delta (FSubset): non-empty F-subset of dimension 2

    Returns:
        Invariants2: exact values read off the vertex list
    """
    if delta.dim != 2:
        raise WrongDimension(f"invariants2 needs e = 2, got {delta.dim}")
    if delta.is_empty:
        raise EmptyPolyhedron("invariants2 of the empty polyhedron")
    chain = delta.vertices
    first, last = chain[0], chain[-1]
    level, face = delta_face(delta)
    heights = [v[1] for v in face.vertices]
    return Invariants2(
        alpha=first[0],
        beta=first[1],
        delta=level,
        gamma_plus=max(heights),
        gamma_minus=min(heights),
        epsilon=last[1],
        zeta=last[0],
    )


def project(delta: FSubset, s: int) -> FSubset:
    """pi_s: keep the first s coordinates."""
    if not 1 <= s <= delta.dim:
        raise BadIndex(f"projection index {s} outside 1..{delta.dim}")
    return minimal_fsubset((v[:s] for v in delta.vertices), dim=s)


@dataclass(frozen=True)
class AffineMap:
    """
    Integer-matrix affine map a -> M a + c on Q^e.

    Args:
        matrix (Tuple[Tuple[int, ...], ...]): rows of M
        offset (Tuple[int, ...]): c
    """

    matrix: Tuple[Tuple[int, ...], ...]
    offset: Tuple[int, ...]
    name: str = "affine"

    def __call__(self, point: Sequence) -> Point:
        return tuple(sum((m * Fraction(x) for m, x in zip(row, point)), Fraction(0)) + c
                     for row, c in zip(self.matrix, self.offset))

    @classmethod
    def identity(cls, e: int) -> "AffineMap":
        return cls(tuple(tuple(int(i == j) for j in range(e)) for i in range(e)), (0,) * e, "identity")

    @classmethod
    def point_u1(cls, e: int) -> "AffineMap":
        """(a_1, ..., a_e) -> (a_1 + ... + a_e - 1, a_2, ..., a_e)."""
        rows = [tuple([1] * e)] + [tuple(int(i == j) for j in range(e)) for i in range(1, e)]
        return cls(tuple(rows), (-1,) + (0,) * (e - 1), "point-u1")

    @classmethod
    def point_u2(cls) -> "AffineMap":
        """(a_1, a_2) -> (a_1, a_1 + a_2 - 1)."""
        return cls(((1, 0), (1, 1)), (0, -1), "point-u2")

    @classmethod
    def curve(cls, e: int, index: int = 0) -> "AffineMap":
        """a_index -> a_index - 1, other coordinates fixed."""
        rows = tuple(tuple(int(i == j) for j in range(e)) for i in range(e))
        return cls(rows, tuple(-int(i == index) for i in range(e)), f"curve-u{index + 1}")


def map_and_rebuild(delta: FSubset, psi: AffineMap) -> FSubset:
    """minimal_fsubset of the images of the vertices."""
    return minimal_fsubset((psi(v) for v in delta.vertices), dim=delta.dim)
