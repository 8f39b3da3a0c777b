"""
Hilbert Functions of Monomial Ideals

Hilbert functions H(n) = dim_k (k[X]/I)_n of monomial ideals, their iterated
sums H^(t), Hilbert polynomials with exact rational coefficients, the
binomial decomposition a(P) and the total order on Hilbert polynomials it
induces.
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import sympy

from config.config import HILBERT_CONFIG
from src.errors import BadParameters, NotAHilbertPolynomial, ScaleExceeded

logger = logging.getLogger(__name__)

T = sympy.Symbol("T")


def _binomial_poly(shift: int, k: int) -> sympy.Poly:
    """C(T + shift, k) as a polynomial in T."""
    expr = sympy.Integer(1)
    for i in range(k):
        expr *= (T + shift - i)
    return sympy.Poly(expr / sympy.factorial(k), T, domain="QQ")


@dataclass(frozen=True)
class HilbertPolynomial:
    """
    A polynomial in T with rational coefficients taking integer values on Z.

    Args:
        poly (sympy.Poly): the polynomial over QQ
    """

    poly: sympy.Poly

    def __post_init__(self):
        for n in range(max(self.degree, 0) + 1):
            if not self.poly.eval(n).is_integer:
                raise NotAHilbertPolynomial(f"{self} is not integer valued at T = {n}")

    @classmethod
    def of(cls, expr: Any) -> "HilbertPolynomial":
        return cls(sympy.Poly(sympy.sympify(expr), T, domain="QQ"))

    @classmethod
    def parse(cls, text: str) -> "HilbertPolynomial":
        try:
            expr = sympy.sympify(text, locals={"T": T, "n": T})
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise BadParameters(f"cannot read polynomial {text!r}: {e}")
        if expr.free_symbols - {T}:
            raise BadParameters(f"polynomial {text!r} may only use the variable T")
        return cls.of(expr)

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return -1 if self.poly.is_zero else self.poly.degree()

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    def __call__(self, n: int) -> int:
        return int(self.poly.eval(n))

    def __eq__(self, other) -> bool:
        return isinstance(other, HilbertPolynomial) and (self.poly - other.poly).is_zero

    def __hash__(self) -> int:
        return hash(tuple(self.poly.all_coeffs()))

    def __str__(self) -> str:
        return str(self.poly.as_expr())


@dataclass(frozen=True)
class HilbertFunction:
    """
    Explicit values H(0..n0) and a tail polynomial with P(n) = H(n) for n >= start.

    Args:
        values (Tuple[int, ...]): H(0), ..., H(n0)
        tail (HilbertPolynomial): the Hilbert polynomial
        start (int): first n from which the tail agrees with H
    """

    values: Tuple[int, ...]
    tail: HilbertPolynomial
    start: int

    @property
    def n0(self) -> int:
        return len(self.values) - 1

    def __call__(self, n: int) -> int:
        if n < 0:
            return 0
        if n <= self.n0:
            return self.values[n]
        return self.tail(n)

    def head(self, count: int) -> List[int]:
        return [self(n) for n in range(count)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "values": list(self.values),
            "polynomial": str(self.tail),
            "stabilizes_at": self.start,
        }


def _minimalize(generators: np.ndarray) -> np.ndarray:
    """Drop duplicate generators and those divisible by another one."""
    unique = np.unique(generators, axis=0)
    keep = []
    for i, g in enumerate(unique):
        divisible = np.all(unique <= g, axis=1)
        divisible[i] = False
        if not divisible.any():
            keep.append(i)
    return unique[keep]


def _lcm_degree_counts(generators: np.ndarray) -> Dict[int, int]:
    """Signed count of lcm degrees over all subsets of the generators."""
    nvars = generators.shape[1]
    lcms = np.zeros((1, nvars), dtype=np.int64)
    signs = np.ones(1, dtype=np.int64)
    for g in generators:
        lcms = np.concatenate([lcms, np.maximum(lcms, g)])
        signs = np.concatenate([signs, -signs])
    degrees = lcms.sum(axis=1)
    counts: Dict[int, int] = {}
    for d, s in zip(degrees.tolist(), signs.tolist()):
        counts[d] = counts.get(d, 0) + s
    return {d: c for d, c in counts.items() if c}


def _check_scale(generators: Sequence[Sequence[int]], nvars: int) -> None:
    if nvars < 0:
        raise BadParameters(f"number of variables must be >= 0, got {nvars}")
    if nvars > HILBERT_CONFIG["max_vars"]:
        raise ScaleExceeded(f"{nvars} variables exceed the limit {HILBERT_CONFIG['max_vars']}")
    if len(generators) > HILBERT_CONFIG["max_generators"]:
        raise ScaleExceeded(f"{len(generators)} generators exceed the limit {HILBERT_CONFIG['max_generators']}")
    for g in generators:
        if len(g) != nvars:
            raise BadParameters(f"generator {tuple(g)} does not have {nvars} exponents")
        if min(g, default=0) < 0:
            raise BadParameters(f"generator {tuple(g)} has a negative exponent")
        if sum(g) > HILBERT_CONFIG["max_degree"]:
            raise ScaleExceeded(f"generator {tuple(g)} exceeds degree {HILBERT_CONFIG['max_degree']}")


def hf_monomial(generators: Sequence[Sequence[int]], nvars: int) -> HilbertFunction:
    """
    Hilbert function of k[X_1..X_nvars]/I for a monomial ideal I.

    Standard monomials are counted by inclusion-exclusion over the lcms of
    subsets of the minimal generators.

    Args:
        generators (Sequence[Sequence[int]]): exponent vectors of the generators
        nvars (int): number of variables

    Returns:
        HilbertFunction: values up to the largest lcm degree + nvars, and the tail
    """
    _check_scale(generators, nvars)
    max_gen = max((sum(g) for g in generators), default=0)
    if nvars == 0:
        value = 0 if generators else 1
        values = (value,) + (0,) * max_gen
        return HilbertFunction(values, HilbertPolynomial.of(0), 1)

    gens = _minimalize(np.array(generators, dtype=np.int64)) if generators else np.zeros((0, nvars), dtype=np.int64)
    counts = _lcm_degree_counts(gens)
    logger.debug(f"lcm degree counts {counts} for {len(gens)} minimal generators")
    # the tail agrees with H once n >= (largest lcm degree) - nvars + 1
    n0 = max([max_gen] + list(counts)) + nvars

    def value(n: int) -> int:
        return sum(c * math.comb(n - d + nvars - 1, nvars - 1) for d, c in counts.items() if n - d >= 0)

    values = tuple(value(n) for n in range(n0 + 1))
    tail_poly = sympy.Poly(0, T, domain="QQ")
    for d, c in counts.items():
        tail_poly += c * _binomial_poly(nvars - 1 - d, nvars - 1)
    tail = HilbertPolynomial(tail_poly)
    start = n0 + 1
    while start > 0 and tail(start - 1) == values[start - 1]:
        start -= 1
    return HilbertFunction(values, tail, start)


def iterate_sum(H: HilbertFunction, t: int) -> HilbertFunction:
    """
    The t-fold iterated sum H^(t)(n) = sum_{i <= n} H^(t-1)(i).

    Raises:
        ScaleExceeded: t above the configured limit
    """
    if t < 0:
        raise BadParameters(f"iteration count must be >= 0, got {t}")
    if t > HILBERT_CONFIG["max_iterations"]:
        raise ScaleExceeded(f"iteration count {t} exceeds {HILBERT_CONFIG['max_iterations']}")
    i = sympy.Symbol("i", integer=True)
    for _ in range(t):
        n0 = H.n0
        values = []
        running = 0
        for v in H.values:
            running += v
            values.append(running)
        # beyond n0 the summands follow the old tail once n0 >= old start
        tail_expr = running + sympy.summation(H.tail.poly.as_expr().subs(T, i), (i, n0 + 1, T))
        tail = HilbertPolynomial(sympy.Poly(sympy.expand(tail_expr), T, domain="QQ"))
        start = n0 + 1
        while start > 0 and tail(start - 1) == values[start - 1]:
            start -= 1
        H = HilbertFunction(tuple(values), tail, start)
    return H


@dataclass(frozen=True)
class ADecomposition:
    """a(P) = (a_1 >= ... >= a_s); the empty tuple belongs to P = 0."""

    parts: Tuple[int, ...]

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.parts) + ")"

    def to_list(self) -> List[int]:
        return list(self.parts)


def decompose(P: HilbertPolynomial) -> ADecomposition:
    """
    Greedy decomposition P = sum_i C(T + a_i - (i - 1), a_i).

    Raises:
        NotAHilbertPolynomial: the greedy steps are not non-increasing, or too many
    """
    limit = HILBERT_CONFIG["max_decomposition_length"]
    parts: List[int] = []
    current = P.poly
    while not current.is_zero:
        a = current.degree()
        if current.LC() < 0:
            raise NotAHilbertPolynomial(f"{P} has a negative remainder after {tuple(parts)}")
        if parts and a > parts[-1]:
            raise NotAHilbertPolynomial(f"{P} needs an increasing part after {tuple(parts)}")
        parts.append(a)
        if len(parts) > limit:
            raise NotAHilbertPolynomial(f"decomposition of {P} exceeds {limit} parts")
        rest = current - _binomial_poly(a, a)
        current = sympy.Poly(rest.as_expr().subs(T, T + 1), T, domain="QQ")
    logger.debug(f"a({P}) = {tuple(parts)}")
    return ADecomposition(tuple(parts))


def recompose(a: ADecomposition) -> HilbertPolynomial:
    poly = sympy.Poly(0, T, domain="QQ")
    for i, ai in enumerate(a.parts):
        poly += _binomial_poly(ai - i, ai)
    return HilbertPolynomial(poly)


def compare(P: HilbertPolynomial, Q: HilbertPolynomial) -> str:
    """'<', '=' or '>' by the lexicographic order of a(P), a(Q) padded with -inf."""
    a, b = decompose(P).parts, decompose(Q).parts
    if a == b:
        return "="
    return ">" if a > b else "<"


def phi(t: int, n: int) -> int:
    """C(n + t - 1, n), the Hilbert function of a polynomial ring in t variables."""
    if t < 0 or n < 0:
        raise BadParameters(f"phi needs t, n >= 0, got ({t}, {n})")
    if n == 0:
        return 1
    return math.comb(n + t - 1, n)


_MONOMIAL_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")


def parse_monomial_ideal(text: str, names: Sequence[str]) -> List[Tuple[int, ...]]:
    """
    Read generators like "x^2,x*y" over the variables `names`.

    Returns:
        List[Tuple[int, ...]]: exponent vectors; "1" gives the unit ideal
    """
    index = {name: i for i, name in enumerate(names)}
    generators = []
    for chunk in (c.strip() for c in text.split(",")):
        if not chunk:
            continue
        exps = [0] * len(names)
        if chunk != "1":
            for factor in chunk.replace(" ", "").split("*"):
                match = _MONOMIAL_FACTOR.match(factor)
                if not match:
                    raise BadParameters(f"cannot read monomial factor {factor!r} in {chunk!r}")
                name, power = match.group(1), int(match.group(2) or 1)
                if name not in index:
                    raise BadParameters(f"undeclared variable {name!r} in {chunk!r}")
                exps[index[name]] += power
        generators.append(tuple(exps))
    return generators


def hilbert_report(generators: Sequence[Sequence[int]], nvars: int, t: int = 0) -> Dict[str, Any]:
    """Values, tail polynomial and a(P) of H^(t) for a monomial ideal."""
    H = iterate_sum(hf_monomial(generators, nvars), t)
    a = decompose(H.tail)
    data = H.to_dict()
    data.update({"t": t, "a": str(a), "a_parts": a.to_list()})
    return data

