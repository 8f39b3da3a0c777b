"""
Error hierarchy for the characteristic polyhedron toolkit

Every exception raised by the library derives from ResolutionError and carries
the process exit code the CLI reports for it:

- 3: bad input (syntax, parameters, operations applied outside their domain)
- 2: inconclusive run (undecided solvability, step cap, unit limit)
- 1: a checked invariant failed, which falsifies the implementation
"""

from typing import Optional


class ResolutionError(Exception):
    """Base class for every library error."""

    exit_code = 1


# --- input errors (exit code 3) -------------------------------------------

class InputError(ResolutionError, ValueError):
    """Input data cannot be processed as given."""

    exit_code = 3


class JobSyntaxError(InputError):
    """A job file does not follow the job grammar."""

    def __init__(self, message: str, line: int, col: int, expected: Optional[str] = None):
        self.line = line
        self.col = col
        self.expected = expected
        detail = f" (expected {expected})" if expected else ""
        super().__init__(f"line {line}, col {col}: {message}{detail}")


class UndeclaredVariable(InputError):
    """An identifier is used that the vars line does not declare."""

    def __init__(self, name: str, line: int = 0, col: int = 0):
        self.name = name
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: undeclared variable '{name}'")


class BadParameters(InputError):
    """Numeric parameters violate their documented constraints."""


class ReducibleModulus(InputError):
    """A field extension or non-rational chart was given a reducible polynomial."""


class ScaleExceeded(InputError):
    """The request exceeds the configured desk-scale limits."""


class FrameMismatch(InputError):
    """Polynomials from incompatible frames were combined."""


class UnboundedFace(InputError):
    """A face selector was given a linear form that is not positive."""


class EmptyPolyhedron(InputError):
    """An operation needs a non-empty polyhedron."""


class WrongDimension(InputError):
    """An operation is only defined for a specific ambient dimension."""


class NegativeCoordinate(InputError):
    """A point with a negative coordinate was passed to an F-subset constructor."""


class BadIndex(InputError):
    """A projection or coordinate index is out of range."""


class BoundaryInUIdeal(InputError):
    """An old boundary generator lies in the ideal generated by the u-block."""


class UnsupportedField(InputError):
    """The operation is not available over the label's coefficient field."""


class NotWeaklyNormalized(InputError):
    """Normalization was requested on a label that is not weakly normalized."""


class NotAVertex(InputError):
    """A point passed as a vertex is not a vertex of the polyhedron."""


class NotPrepared(InputError):
    """A fundamental sequence was requested on an unprepared label."""


class NotAHilbertPolynomial(InputError):
    """A polynomial has no binomial decomposition."""


class NonDivisible(ResolutionError, ArithmeticError):
    """A chart division u^m does not divide every term."""

    exit_code = 3


# --- inconclusive runs (exit code 2) --------------------------------------

class Inconclusive(ResolutionError):
    """A run met a state the algorithms cannot decide."""

    exit_code = 2


class NonTermination(Inconclusive):
    """Preparation exceeded its step cap."""


# --- invariant violations (exit code 1) ------------------------------------

class InvariantViolation(ResolutionError, AssertionError):
    """A checked mathematical contract failed on a concrete run."""

    exit_code = 1


class MonotonicityViolation(InvariantViolation):
    """beta^O increased across a unit."""


class LedgerViolation(InvariantViolation):
    """The driver ledger (beta^O quantization, zeta recurrence) failed."""
