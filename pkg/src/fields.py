"""
Exact Coefficient Fields

This module implements the residue fields the toolkit computes over: the
rationals, prime fields F_p and simple extensions F_p[t]/(Phi). Every field
exposes the same arithmetic API on plain hashable element values so that
polynomials can store coefficients in dictionaries without wrapper objects.

Element representations:
- RationalField: fractions.Fraction
- PrimeField: int in [0, p)
- ExtensionField: tuple of d ints in [0, p), coefficients of 1, t, ..., t^(d-1)
"""

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Tuple

from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_gcdex,
    gf_irreducible_p,
    gf_mul,
    gf_rem,
    gf_strip,
)

from src.errors import BadParameters, ReducibleModulus, ScaleExceeded, UnsupportedField

logger = logging.getLogger(__name__)

MAX_PRIME = 2 ** 31
MAX_EXTENSION_DEGREE = 8


class Field:
    """Common interface of the coefficient fields."""

    kind = "abstract"

    @property
    def zero(self) -> Any:
        raise NotImplementedError

    @property
    def one(self) -> Any:
        raise NotImplementedError

    @property
    def characteristic(self) -> int:
        raise NotImplementedError

    @property
    def degree(self) -> int:
        """Degree over the prime field (1 for Q and F_p)."""
        return 1

    @property
    def size(self) -> Optional[int]:
        """Number of elements, None when infinite."""
        return None

    def from_int(self, n: int) -> Any:
        raise NotImplementedError

    def from_fraction(self, q: Fraction) -> Any:
        """Map a rational number into the field, dividing in the field."""
        num = self.from_int(q.numerator)
        den = self.from_int(q.denominator)
        if self.is_zero(den):
            raise BadParameters(f"denominator {q.denominator} vanishes in {self.spec_text()}")
        return self.div(num, den)

    def add(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def neg(self, a: Any) -> Any:
        raise NotImplementedError

    def mul(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def inv(self, a: Any) -> Any:
        raise NotImplementedError

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def div(self, a: Any, b: Any) -> Any:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Any) -> bool:
        return a == self.zero

    def is_one(self, a: Any) -> bool:
        return a == self.one

    def pow(self, a: Any, n: int) -> Any:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def pth_root(self, a: Any) -> Any:
        raise UnsupportedField(f"no p-th roots in {self.spec_text()}")

    def elements(self) -> Iterator[Any]:
        raise UnsupportedField(f"cannot enumerate {self.spec_text()}")

    def embed(self, c: Any, source: "Field") -> Any:
        """Map an element of `source` into this field."""
        if source == self:
            return c
        raise UnsupportedField(f"cannot embed {source.spec_text()} into {self.spec_text()}")

    def to_str(self, a: Any) -> str:
        raise NotImplementedError

    def spec_text(self) -> str:
        """The field line of a job file, without the `field` keyword."""
        raise NotImplementedError

    def is_negative(self, a: Any) -> bool:
        """Whether to_str(a) starts with a minus sign."""
        return False

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "text": self.spec_text(), "characteristic": self.characteristic,
                "degree": self.degree}


@dataclass(frozen=True)
class RationalField(Field):
    """The rational numbers."""

    kind = "rationals"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    @property
    def characteristic(self) -> int:
        return 0

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def from_fraction(self, q: Fraction) -> Fraction:
        return Fraction(q)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def sub(self, a, b):
        return a - b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def pth_root(self, a):
        # characteristic 0: the only "p-th root" requested is the identity
        return a

    def to_str(self, a: Fraction) -> str:
        return str(a)

    def is_negative(self, a: Fraction) -> bool:
        return a < 0

    def spec_text(self) -> str:
        return "Q"


@dataclass(frozen=True)
class PrimeField(Field):
    """The prime field F_p."""

    p: int
    kind = "prime"

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p > MAX_PRIME or not isprime(self.p):
            raise BadParameters(f"F_p needs a prime p <= 2^31, got {self.p}")

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pth_root(self, a):
        # Frobenius is the identity on F_p
        return a

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def to_str(self, a: int) -> str:
        return str(a)

    def spec_text(self) -> str:
        return f"F_{self.p}"


@dataclass(frozen=True)
class ExtensionField(Field):
    """
    A simple extension F_p[t]/(Phi) of a prime field.

    Args:
        p (int): the characteristic
        modulus (Tuple[int, ...]): monic irreducible Phi, coefficients from the highest degree down
        name (str): generator name used when printing elements
    """

    p: int
    modulus: Tuple[int, ...]
    name: str = "t"
    base: PrimeField = dc_field(init=False, repr=False, compare=False)
    kind = "extension"

    def __post_init__(self):
        object.__setattr__(self, "base", PrimeField(self.p))
        modulus = tuple(int(c) % self.p for c in self.modulus)
        modulus = tuple(gf_strip(list(modulus)))
        if len(modulus) < 2:
            raise ReducibleModulus("extension modulus must have degree >= 1")
        if len(modulus) - 1 > MAX_EXTENSION_DEGREE:
            raise ScaleExceeded(f"extension degree {len(modulus) - 1} exceeds {MAX_EXTENSION_DEGREE}")
        lead_inv = pow(modulus[0], -1, self.p)
        modulus = tuple((c * lead_inv) % self.p for c in modulus)
        if not gf_irreducible_p(ZZ.map(list(modulus)), self.p, ZZ):
            raise ReducibleModulus(f"{_poly_text(modulus, self.name)} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", modulus)

    @property
    def d(self) -> int:
        return len(self.modulus) - 1

    @property
    def zero(self) -> Tuple[int, ...]:
        return (0,) * self.d

    @property
    def one(self) -> Tuple[int, ...]:
        return (1,) + (0,) * (self.d - 1)

    @property
    def generator(self) -> Tuple[int, ...]:
        if self.d == 1:
            return ((-self.modulus[-1]) % self.p,)
        return (0, 1) + (0,) * (self.d - 2)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def degree(self) -> int:
        return self.d

    @property
    def size(self) -> int:
        return self.p ** self.d

    def _to_gf(self, a: Tuple[int, ...]) -> List:
        return gf_strip(ZZ.map(list(reversed(a))))

    def _from_gf(self, coeffs: List) -> Tuple[int, ...]:
        low_first = [int(c) % self.p for c in reversed(coeffs)]
        low_first = low_first[: self.d]
        return tuple(low_first + [0] * (self.d - len(low_first)))

    def from_int(self, n: int) -> Tuple[int, ...]:
        return (n % self.p,) + (0,) * (self.d - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        if not any(a) or not any(b):
            return self.zero
        prod = gf_mul(self._to_gf(a), self._to_gf(b), self.p, ZZ)
        return self._from_gf(gf_rem(prod, ZZ.map(list(self.modulus)), self.p, ZZ))

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        # the monic gcd is 1 since the modulus is irreducible
        s, _, _ = gf_gcdex(self._to_gf(a), ZZ.map(list(self.modulus)), self.p, ZZ)
        return self._from_gf(gf_rem(s, ZZ.map(list(self.modulus)), self.p, ZZ))

    def pth_root(self, a):
        # the inverse of Frobenius is its (d-1)-st power
        return self.pow(a, self.p ** (self.d - 1))

    def elements(self) -> Iterator[Tuple[int, ...]]:
        for coeffs in itertools.product(range(self.p), repeat=self.d):
            yield tuple(coeffs)

    def embed(self, c: Any, source: Field) -> Tuple[int, ...]:
        if source == self:
            return c
        if isinstance(source, PrimeField) and source.p == self.p:
            return self.from_int(c)
        return super().embed(c, source)

    def to_str(self, a: Tuple[int, ...]) -> str:
        return _poly_text(tuple(reversed(a)), self.name)

    def spec_text(self) -> str:
        return f"F_{self.p}[{_poly_text(self.modulus, self.name)}]"

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["modulus"] = _poly_text(self.modulus, self.name)
        return data


def _poly_text(high_first: Tuple[int, ...], name: str) -> str:
    """Print a polynomial over F_p given high-to-low coefficients."""
    deg = len(high_first) - 1
    parts = []
    for i, c in enumerate(high_first):
        c = int(c)
        if c == 0:
            continue
        k = deg - i
        if k == 0:
            parts.append(str(c))
            continue
        mono = name if k == 1 else f"{name}^{k}"
        parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts) if parts else "0"


def prime_field_of(field: Field) -> Field:
    """The prime subfield (Q for characteristic 0)."""
    if isinstance(field, ExtensionField):
        return field.base
    return field


def field_from_spec(kind: str, p: Optional[int] = None, modulus: Optional[Tuple[int, ...]] = None,
                    name: str = "t") -> Field:
    """
    Build a field from its job-file description.

    Args:
        kind (str): 'Q', 'F_p' or 'F_p[...]'
        p (int): characteristic for the finite cases
        modulus (Tuple[int, ...]): extension modulus, highest degree first

    Returns:
        Field: the coefficient field
    """
    if kind == "Q":
        return RationalField()
    if modulus is None:
        return PrimeField(p)
    return ExtensionField(p, tuple(modulus), name)
