"""
Sparse linear algebra over the coefficient fields

Vectors are dictionaries column -> nonzero field element. Columns may be any
hashable value (monomial exponents, variable indices); a key function fixes
which column is preferred as a pivot.

Null spaces and affine systems over Q and F_p go through sympy's DomainMatrix;
extension fields, which DomainMatrix does not cover, use the Echelon below.
"""

import logging
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Tuple

from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from src.fields import Field, PrimeField, RationalField

logger = logging.getLogger(__name__)

Vector = Dict[Hashable, Any]


def axpy(field: Field, target: Vector, scalar: Any, source: Vector) -> None:
    """target += scalar * source, in place, dropping zeros."""
    if field.is_zero(scalar):
        return
    for col, value in source.items():
        updated = field.add(target.get(col, field.zero), field.mul(scalar, value))
        if field.is_zero(updated):
            target.pop(col, None)
        else:
            target[col] = updated


class Echelon:
    """
    Incrementally maintained reduced row echelon form.

    Every stored pivot row has pivot coefficient 1 and no entries in the other
    pivot columns. Rows may carry a `combo` vector recording how they were
    obtained from the inserted inputs.

    Args:
        field (Field): coefficient field
        key (Callable): sort key on columns; the pivot is the column with the smallest key
    """

    def __init__(self, field: Field, key: Optional[Callable[[Hashable], Any]] = None):
        self.field = field
        self.key = key if key is not None else (lambda col: col)
        self.pivots: Dict[Hashable, Tuple[Vector, Vector]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Vector, combo: Optional[Vector] = None) -> Tuple[Vector, Vector]:
        """Reduce `vec` modulo the stored rows; returns (remainder, combo)."""
        field = self.field
        vec = dict(vec)
        combo = dict(combo or {})
        for col in [c for c in vec if c in self.pivots]:
            coeff = vec.get(col)
            if coeff is None:
                continue
            row, row_combo = self.pivots[col]
            axpy(field, vec, field.neg(coeff), row)
            axpy(field, combo, field.neg(coeff), row_combo)
        return vec, combo

    def insert(self, vec: Vector, combo: Optional[Vector] = None) -> Optional[Hashable]:
        """Add a row; returns its pivot column, or None when it was dependent."""
        field = self.field
        vec, combo = self.reduce(vec, combo)
        if not vec:
            return None
        pivot = min(vec, key=self.key)
        scale = field.inv(vec[pivot])
        vec = {c: field.mul(scale, v) for c, v in vec.items()}
        combo = {c: field.mul(scale, v) for c, v in combo.items()}
        for col, (row, row_combo) in self.pivots.items():
            coeff = row.get(pivot)
            if coeff is not None:
                axpy(field, row, field.neg(coeff), vec)
                axpy(field, row_combo, field.neg(coeff), combo)
        self.pivots[pivot] = (vec, combo)
        return pivot

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)[0]


def _sympy_domain(field: Field):
    """QQ or GF(p) for the fields sympy's DomainMatrix covers, None for extensions."""
    if isinstance(field, RationalField):
        return QQ
    if isinstance(field, PrimeField):
        return GF(field.p, symmetric=False)
    return None


def _to_domain(field: Field, x: Any):
    if isinstance(field, RationalField):
        x = Fraction(x)
        return (x.numerator, x.denominator)
    return int(x)


def _from_domain(field: Field, domain, x: Any) -> Any:
    if isinstance(field, RationalField):
        return Fraction(int(x.numerator), int(x.denominator))
    return domain.to_int(x) % field.p


def _rref(rows: List[Vector], field: Field, ncols: int):
    """Dense RREF of sparse rows via DomainMatrix; returns (rows, pivot columns)."""
    domain = _sympy_domain(field)
    dense = [[_to_domain(field, row.get(col, field.zero)) for col in range(ncols)] for row in rows]
    reduced, pivots = DomainMatrix.from_list(dense, domain).rref()
    values = [[_from_domain(field, domain, x) for x in row] for row in reduced.to_list()]
    return values, pivots


def _kernel_from_rref(values: List[List[Any]], pivots: Tuple[int, ...], field: Field, ncols: int) -> List[Vector]:
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = {free: field.one}
        for i, col in enumerate(pivots):
            coeff = values[i][free]
            if not field.is_zero(coeff):
                vec[col] = field.neg(coeff)
        basis.append(vec)
    return basis


def _echelon_nullspace(rows: Iterable[Vector], field: Field, ncols: int) -> List[Vector]:
    ech = Echelon(field)
    for row in rows:
        ech.insert(row)
    basis = []
    for free in range(ncols):
        if free in ech.pivots:
            continue
        vec = {free: field.one}
        for col, (row, _) in ech.pivots.items():
            coeff = row.get(free)
            if coeff is not None:
                vec[col] = field.neg(coeff)
        basis.append(vec)
    return basis


def nullspace(rows: Iterable[Vector], field: Field, ncols: int) -> List[Vector]:
    """
    Basis of {x in k^ncols : row . x = 0 for every row}.

    Args:
        rows (Iterable[Vector]): sparse rows indexed by 0..ncols-1
        field (Field): coefficient field
        ncols (int): number of unknowns

    Returns:
        List[Vector]: basis vectors, one per free column
    """
    rows = [row for row in rows if row]
    if _sympy_domain(field) is None:
        return _echelon_nullspace(rows, field, ncols)
    if not rows:
        return [{free: field.one} for free in range(ncols)]
    values, pivots = _rref(rows, field, ncols)
    return _kernel_from_rref(values, pivots, field, ncols)


def _echelon_solve(rows: List[Tuple[Vector, Any]], field: Field,
                   ncols: int) -> Tuple[Optional[Vector], List[Vector]]:
    rhs_col = ncols
    ech = Echelon(field)
    for row, rhs in rows:
        augmented = dict(row)
        if not field.is_zero(rhs):
            augmented[rhs_col] = rhs
        ech.insert(augmented)
    if rhs_col in ech.pivots:
        logger.debug("linear system is inconsistent")
        return None, []
    particular = {}
    for col, (row, _) in ech.pivots.items():
        value = row.get(rhs_col)
        if value is not None:
            particular[col] = value
    return particular, _echelon_nullspace([row for row, _ in rows], field, ncols)


def solve_affine(rows: Iterable[Tuple[Vector, Any]], field: Field,
                 ncols: int) -> Tuple[Optional[Vector], List[Vector]]:
    """
    Solve the system row . x = rhs over the field.

    Args:
        rows: pairs (sparse row over 0..ncols-1, right hand side)
        field (Field): coefficient field
        ncols (int): number of unknowns

    Returns:
        (particular solution or None when inconsistent, basis of the homogeneous solutions)
    """
    rows = list(rows)
    if _sympy_domain(field) is None:
        return _echelon_solve(rows, field, ncols)
    augmented = []
    for row, rhs in rows:
        line = dict(row)
        if not field.is_zero(rhs):
            line[ncols] = rhs
        augmented.append(line)
    augmented = [line for line in augmented if line]
    if not augmented:
        return {}, [{free: field.one} for free in range(ncols)]
    values, pivots = _rref(augmented, field, ncols + 1)
    if ncols in pivots:
        logger.debug("linear system is inconsistent")
        return None, []
    particular = {}
    for i, col in enumerate(pivots):
        value = values[i][ncols]
        if not field.is_zero(value):
            particular[col] = value
    return particular, _kernel_from_rref(values, pivots, field, ncols)
