"""
Job File Parser

Reads the job language:

    # comment
    field F_3                      (or Q, or F_p[t^2 + 1])
    vars y | u1 u2
    f = y^3 + y*u1^36*u2^36 + u1^2*u2*(u1 + u2)^12
    boundary B1: u2 + y old
    param M = 5

Polynomials are parsed with a small Pratt parser: +, -, *, /, ^ with integer
exponents, parentheses, implicit multiplication, integer literals and the
generator name of an extension field. Every error carries line and column.
"""

import logging
import re
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterator, List, Optional, Tuple

from src.algebra import Frame, Polynomial
from src.charpoly import BoundaryComponent, Label
from src.errors import InputError, JobSyntaxError, UndeclaredVariable
from src.fields import ExtensionField, Field, PrimeField, RationalField

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
KEYWORDS = {"field", "vars", "boundary", "param", "old", "new"}


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'ident', 'op', 'end'
    text: str
    col: int


def tokenize(text: str, line: int = 1, offset: int = 0) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            col = offset + pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise JobSyntaxError(f"unexpected character {text[col - offset - 1]!r}", line, col,
                                 "number, name or operator")
        start = match.start(match.lastindex)
        kind = {1: "int", 2: "ident", 3: "op"}[match.lastindex]
        value = match.group(match.lastindex)
        tokens.append(Token(kind, "^" if value == "**" else value, offset + start + 1))
        pos = match.end()
    tokens.append(Token("end", "", offset + len(text.rstrip()) + 1))
    return tokens


class PolynomialParser:
    """
    Pratt parser for polynomial expressions in a frame.

    Args:
        frame (Frame): the variables and coefficient field
        line (int): line number used in error messages
        scalars (Dict[str, Polynomial]): extra names that denote constants
    """

    PRECEDENCE = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}

    def __init__(self, frame: Frame, line: int = 1, scalars: Optional[Dict[str, Polynomial]] = None):
        self.frame = frame
        self.line = line
        self.scalars = scalars or {}
        self.tokens: List[Token] = []
        self.pos = 0

    def parse(self, text: str, offset: int = 0) -> Polynomial:
        self.tokens = tokenize(text, self.line, offset)
        self.pos = 0
        if self.peek.kind == "end":
            raise JobSyntaxError("empty polynomial", self.line, self.peek.col, "polynomial")
        result = self.expression(0)
        if self.peek.kind != "end":
            raise JobSyntaxError(f"unexpected {self.peek.text!r}", self.line, self.peek.col, "operator or end of line")
        return result

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _starts_operand(self, token: Token) -> bool:
        return token.kind in ("int", "ident") or token.text == "("

    def expression(self, min_bp: int) -> Polynomial:
        left = self.prefix()
        while True:
            token = self.peek
            if token.kind == "op" and token.text in self.PRECEDENCE:
                op = token.text
            elif self._starts_operand(token):
                op = "*"  # juxtaposition
            else:
                return left
            bp = self.PRECEDENCE[op]
            if bp <= min_bp and op != "^":
                return left
            if op == "^":
                if bp <= min_bp:
                    return left
                self.advance()
                left = left ** self.exponent()
                continue
            if token.kind == "op":
                self.advance()
            right = self.expression(bp)
            if op == "+":
                left = left + right
            elif op == "-":
                left = left - right
            elif op == "*":
                left = left * right
            else:
                left = self.divide(left, right, token)

    def prefix(self) -> Polynomial:
        token = self.advance()
        if token.kind == "int":
            return Polynomial.constant(self.frame, self.frame.field.from_int(int(token.text)))
        if token.kind == "ident":
            if token.text in self.scalars:
                return self.scalars[token.text]
            if token.text not in self.frame.names:
                raise UndeclaredVariable(token.text, self.line, token.col)
            return Polynomial.variable(self.frame, token.text)
        if token.text == "(":
            inner = self.expression(0)
            closing = self.advance()
            if closing.text != ")":
                raise JobSyntaxError(f"unexpected {closing.text or 'end of line'!r}", self.line, closing.col, "')'")
            return inner
        if token.text in ("-", "+"):
            operand = self.expression(self.PRECEDENCE["*"])
            return -operand if token.text == "-" else operand
        raise JobSyntaxError(f"unexpected {token.text or 'end of line'!r}", self.line, token.col, "operand")

    def exponent(self) -> int:
        token = self.advance()
        if token.kind != "int":
            raise JobSyntaxError(f"exponent must be a non-negative integer, got {token.text!r}",
                                 self.line, token.col, "integer")
        return int(token.text)

    def divide(self, left: Polynomial, right: Polynomial, token: Token) -> Polynomial:
        field = self.frame.field
        constant = right.coefficient((0,) * self.frame.r, (0,) * self.frame.e)
        if len(right) != 1 or field.is_zero(constant):
            raise JobSyntaxError("division only by non-zero constants", self.line, token.col, "constant divisor")
        return left.scale(field.inv(constant))


@dataclass
class JobFile:
    """
    A parsed job.

    Args:
        field (Field): the coefficient field
        frame (Frame): y- and u-variables over the field
        generators (List[Tuple[str, Polynomial]]): named generator equations in order
        boundary (List[BoundaryComponent]): declared boundary components
        params (Dict[str, str]): command parameters
    """

    field: Field
    frame: Frame
    generators: List[Tuple[str, Polynomial]] = dc_field(default_factory=list)
    boundary: List[BoundaryComponent] = dc_field(default_factory=list)
    params: Dict[str, str] = dc_field(default_factory=dict)

    def to_label(self) -> Label:
        if not self.generators:
            raise InputError("job declares no generator")
        return Label.build(self.frame, [f for _, f in self.generators], self.boundary)

    def to_text(self) -> str:
        """Canonical form; parse_job(job.to_text()) reproduces the job."""
        lines = [f"field {self.field.spec_text()}",
                 f"vars {' '.join(self.frame.y_names)} | {' '.join(self.frame.u_names)}"]
        lines.extend(f"{name} = {f}" for name, f in self.generators)
        lines.extend(f"boundary {c.ident}: {c.generator} {'old' if c.old else 'new'}" for c in self.boundary)
        lines.extend(f"param {k} = {v}" for k, v in self.params.items())
        return "\n".join(lines) + "\n"

    def param_int(self, key: str, default: Optional[int] = None) -> Optional[int]:
        if key not in self.params:
            return default
        try:
            return int(self.params[key])
        except ValueError:
            raise InputError(f"parameter {key} must be an integer, got {self.params[key]!r}")


def _numbered_lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield number, line


def _parse_field(rest: str, number: int, offset: int) -> Field:
    text = rest.strip()
    col = offset + len(rest) - len(rest.lstrip()) + 1
    if text == "Q":
        return RationalField()
    match = re.fullmatch(r"F_(\d+)(?:\s*\[(.*)\])?", text)
    if not match:
        raise JobSyntaxError(f"unknown field {text!r}", number, col, "Q, F_p or F_p[poly]")
    p = int(match.group(1))
    try:
        base = PrimeField(p)
    except InputError as e:
        raise JobSyntaxError(str(e), number, col, "prime characteristic")
    if match.group(2) is None:
        return base
    modulus_text = match.group(2)
    names = set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", modulus_text))
    if len(names) != 1:
        raise JobSyntaxError("extension modulus needs exactly one variable", number, col, "polynomial in one name")
    name = names.pop()
    frame = Frame((name,), ("_",), base)
    inner_offset = offset + len(rest) - len(rest.lstrip()) + text.index("[") + 1
    modulus = PolynomialParser(frame, number).parse(modulus_text, inner_offset)
    degree = max(sum(ex.B) for ex in modulus.terms)
    high_first = tuple(modulus.coefficient((k,), (0,)) for k in range(degree, -1, -1))
    return ExtensionField(p, high_first, name)


def _parse_vars(rest: str, number: int, offset: int) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    if rest.count("|") != 1:
        raise JobSyntaxError("vars needs one '|' between y- and u-variables", number, offset + 1, "'|'")
    y_part, u_part = rest.split("|")
    y_names, u_names = tuple(y_part.split()), tuple(u_part.split())
    bar_col = offset + rest.index("|") + 1
    if not y_names:
        raise JobSyntaxError("empty y-block", number, bar_col, "variable name")
    if not u_names:
        raise JobSyntaxError("empty u-block", number, bar_col + 1, "variable name")
    for name in y_names + u_names:
        if not _IDENT.match(name) or name in KEYWORDS:
            raise JobSyntaxError(f"bad variable name {name!r}", number, offset + rest.index(name) + 1, "identifier")
    if len(set(y_names + u_names)) != len(y_names + u_names):
        raise JobSyntaxError("variable declared twice", number, offset + 1, "distinct names")
    return y_names, u_names


def parse_job(text: str) -> JobFile:
    """
    Parse a job file.

    Args:
        text (str): the job text

    Returns:
        JobFile: field, frame, generators, boundary and parameters

    Raises:
        JobSyntaxError: with line, column and what was expected
        UndeclaredVariable: a polynomial uses an undeclared name
    """
    lines = list(_numbered_lines(text))
    if not lines:
        raise JobSyntaxError("empty job", 1, 1, "'field'")
    field: Optional[Field] = None
    frame: Optional[Frame] = None
    job: Optional[JobFile] = None
    for number, line in lines:
        stripped = line.lstrip()
        indent = len(line) - len(stripped)
        keyword = stripped.split(None, 1)[0] if stripped.split() else ""
        rest_offset = indent + len(keyword)
        rest = stripped[len(keyword):]
        if field is None:
            if keyword != "field":
                raise JobSyntaxError(f"unexpected {keyword!r}", number, indent + 1, "'field'")
            field = _parse_field(rest, number, rest_offset)
            continue
        if frame is None:
            if keyword != "vars":
                raise JobSyntaxError(f"unexpected {keyword!r}", number, indent + 1, "'vars'")
            y_names, u_names = _parse_vars(rest, number, rest_offset)
            frame = Frame(y_names, u_names, field)
            job = JobFile(field, frame)
            continue
        scalars = {}
        if isinstance(field, ExtensionField):
            scalars[field.name] = Polynomial.constant(frame, field.generator)
        if keyword == "boundary":
            match = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:(.*?)\s+(old|new)\s*", rest)
            if not match:
                raise JobSyntaxError("malformed boundary declaration", number, rest_offset + 1,
                                     "'boundary' name ':' polynomial ('old' | 'new')")
            poly_offset = rest_offset + match.start(2)
            poly = PolynomialParser(frame, number, scalars).parse(match.group(2), poly_offset)
            job.boundary.append(BoundaryComponent(match.group(1), poly, match.group(3) == "old"))
        elif keyword == "param":
            match = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)\s*", rest)
            if not match:
                raise JobSyntaxError("malformed parameter", number, rest_offset + 1, "'param' name '=' value")
            job.params[match.group(1)] = match.group(2)
        else:
            match = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*=(.*)", stripped)
            if not match:
                raise JobSyntaxError(f"unexpected {keyword!r}", number, indent + 1,
                                     "generator equation, 'boundary' or 'param'")
            poly = PolynomialParser(frame, number, scalars).parse(match.group(2), indent + match.start(2))
            job.generators.append((match.group(1), poly))
    if frame is None:
        raise JobSyntaxError("missing vars line", lines[-1][0] + 1, 1, "'vars'")
    logger.debug(f"parsed job over {field.spec_text()} with {len(job.generators)} generators")
    return job


def parse_polynomial(text: str, frame: Frame) -> Polynomial:
    """Parse a single polynomial in a frame (used for command-line arguments)."""
    scalars = {}
    if isinstance(frame.field, ExtensionField):
        scalars[frame.field.name] = Polynomial.constant(frame, frame.field.generator)
    return PolynomialParser(frame, 1, scalars).parse(text)
