"""
Maximal Contact Probe

Builds the hypersurface

    f = y^p + y*u1^N*u2^N + u1^a*u2^b*(u1 + u2)^(pA)      over F_p

and follows three chart sequences over the origin:

- Sequence I:   translated chart at the point u1 + u2 = 0, then point-u1 charts
- Sequence II:  point-u2 charts
- Sequence III: point-u1 charts

For a candidate t = y + gamma with gamma of order >= A + 1 it compares
delta(f, z, u) of the prepared reference parameter z with delta(f, t, u)
along the same charts. Once sigma_q = delta_z - delta_t exceeds 1, the
candidate cannot be a hypersurface of maximal contact.
"""

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import sympy

from config.config import PROBE_DEFAULTS
from src.algebra import Frame, Polynomial, substitute
from src.blowup import ChartSpec, point_chart
from src.charpoly import Label, char_polyhedron
from src.errors import BadParameters, NonDivisible
from src.fields import PrimeField
from src.polyhedron import delta_face, fraction_text
from src.resolve import preparation_bound
from src.preparation import prepare

logger = logging.getLogger(__name__)

SEQUENCES = ("I", "II", "III")


@dataclass(frozen=True)
class ProbeParameters:
    p: int
    a: int
    b: int
    A: int
    N: int

    def __post_init__(self):
        p, a, b, A, N = self.p, self.a, self.b, self.A, self.N
        if not sympy.isprime(p):
            raise BadParameters(f"p = {p} is not prime")
        if not (0 < a < p and 0 < b < p and a + b == p):
            raise BadParameters(f"need 0 < a, b < p and a + b = p, got a = {a}, b = {b}, p = {p}")
        if not (A > p and A % p != 0):
            raise BadParameters(f"need A > p and p not dividing A, got A = {A}")
        if N < p * p * A:
            raise BadParameters(f"need N >= p^2 A = {p * p * A}, got N = {N}")

    @classmethod
    def defaults(cls) -> "ProbeParameters":
        return cls(**PROBE_DEFAULTS)

    def to_dict(self) -> Dict[str, int]:
        return {"p": self.p, "a": self.a, "b": self.b, "A": self.A, "N": self.N}


def probe_frame(params: ProbeParameters) -> Frame:
    return Frame(("y",), ("u1", "u2"), PrimeField(params.p))


def probe_polynomial(params: ProbeParameters) -> Polynomial:
    frame = probe_frame(params)
    y = Polynomial.variable(frame, "y")
    u1 = Polynomial.variable(frame, "u1")
    u2 = Polynomial.variable(frame, "u2")
    return (y ** params.p + y * u1 ** params.N * u2 ** params.N
            + u1 ** params.a * u2 ** params.b * (u1 + u2) ** (params.p * params.A))


def probe_label(params: ProbeParameters) -> Label:
    return Label.build(probe_frame(params), [probe_polynomial(params)])


# --- candidates ---------------------------------------------------------------

@dataclass(frozen=True)
class CandidateCase:
    """
    Which sequence decides a candidate.

    C is the multiplicity of (u1 + u2) in the degree A + 1 part Gamma of gamma,
    None when Gamma = 0. For C = A, Gamma = (u1 + u2)^A (c1*u1 + c2*u2).
    """

    C: Optional[int]
    c2_nonzero: Optional[bool]
    sequence: str
    case: str


def _u_coefficients(form: Polynomial) -> Dict[int, Any]:
    """Gamma(1, t) as {power of t: coefficient}."""
    field = form.field
    coeffs: Dict[int, Any] = {}
    for ex, c in form.terms.items():
        coeffs[ex.A[1]] = field.add(coeffs.get(ex.A[1], field.zero), c)
    return coeffs


def _divide_by_t_plus_one(coeffs: List[Any], field) -> Tuple[List[Any], Any]:
    """Synthetic division of a low-to-high coefficient list by (t + 1)."""
    high = list(reversed(coeffs))
    quotient = []
    carry = field.zero
    for c in high:
        carry = field.add(c, field.neg(carry))
        quotient.append(carry)
    remainder = quotient.pop()
    return list(reversed(quotient)), remainder


def _multiplicity_of_u1_plus_u2(gamma_form: Polynomial, degree: int) -> Tuple[int, List[Any]]:
    field = gamma_form.field
    coeffs_map = _u_coefficients(gamma_form)
    coeffs = [coeffs_map.get(k, field.zero) for k in range(degree + 1)]
    C = 0
    while len(coeffs) > 1:
        quotient, remainder = _divide_by_t_plus_one(coeffs, field)
        if not field.is_zero(remainder):
            break
        coeffs = quotient
        C += 1
    return C, coeffs


def classify_candidate(params: ProbeParameters, gamma: Polynomial) -> CandidateCase:
    """
    Decide the case of t = y + gamma.

    Raises:
        BadParameters: gamma involves y or has order <= A
    """
    if any(any(ex.B) for ex in gamma.terms):
        raise BadParameters(f"gamma must be a series in u1, u2: {gamma}")
    if not gamma.is_zero() and gamma.multiplicity() < params.A + 1:
        raise BadParameters(f"gamma must have order >= A + 1 = {params.A + 1}: {gamma}")
    degree = params.A + 1
    Gamma = gamma.homogeneous_part(degree)
    if Gamma.is_zero():
        return CandidateCase(None, None, "I", "C != A")
    C, rest = _multiplicity_of_u1_plus_u2(Gamma, degree)
    if C != params.A:
        return CandidateCase(C, None, "I", "C != A")
    field = gamma.field
    c2_nonzero = len(rest) > 1 and not field.is_zero(rest[1])
    if c2_nonzero:
        return CandidateCase(C, True, "II", "C = A, c2 != 0")
    return CandidateCase(C, False, "III", "C = A, c2 = 0")


def builtin_candidates(params: ProbeParameters) -> List[Polynomial]:
    """gamma = 0, (u1 + u2)^A * u2 and (u1 + u2)^A * u1."""
    frame = probe_frame(params)
    u1 = Polynomial.variable(frame, "u1")
    u2 = Polynomial.variable(frame, "u2")
    return [Polynomial.zero(frame), (u1 + u2) ** params.A * u2, (u1 + u2) ** params.A * u1]


# --- sequences ----------------------------------------------------------------

def _first_chart(sequence: str) -> ChartSpec:
    return {"I": ChartSpec.point_u1(), "II": ChartSpec.point_u2(), "III": ChartSpec.point_u1()}[sequence]


def _sequence_labels(start: Label, sequence: str, steps: int, prepared: bool) -> List[Label]:
    """Labels 0..steps of a sequence; the reference run prepares after every chart."""
    def settle(label: Label) -> Label:
        return prepare(label, preparation_bound(label))[0] if prepared else label

    labels = []
    if sequence == "I":
        frame = start.frame
        current = point_chart(start, ChartSpec.translated(Polynomial.constant(frame, frame.field.one)))
    else:
        current = start
    current = settle(current)
    labels.append(current)
    chart = _first_chart(sequence)
    for _ in range(steps):
        current = settle(point_chart(current, chart))
        labels.append(current)
    return labels


def _delta(label: Label):
    return delta_face(char_polyhedron(label))[0]


@dataclass(frozen=True)
class SequenceStep:
    q: int
    vertices: Tuple[Tuple[Fraction, ...], ...]
    face: Tuple[Tuple[Fraction, ...], ...]
    delta: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "vertices": [[fraction_text(x) for x in v] for v in self.vertices],
            "delta_face": [[fraction_text(x) for x in v] for v in self.face],
            "delta": fraction_text(self.delta),
        }


def reference_sequence(params: ProbeParameters, sequence: str, steps: int = 3) -> List[SequenceStep]:
    """Polyhedra of the prepared reference labels along one sequence."""
    if sequence not in SEQUENCES:
        raise BadParameters(f"unknown sequence {sequence!r}")
    out = []
    for q, label in enumerate(_sequence_labels(probe_label(params), sequence, steps, prepared=True)):
        delta = char_polyhedron(label)
        level, face = delta_face(delta)
        out.append(SequenceStep(q, delta.vertices, face.vertices, level))
    return out


def lower_bound(params: ProbeParameters, sequence: str, q: int) -> Fraction:
    if sequence == "I":
        return Fraction(q + 1, params.p)
    if sequence == "II":
        return Fraction(q * params.a, params.p)
    return Fraction(q * params.b, params.p)


@dataclass(frozen=True)
class SigmaStep:
    q: int
    delta_ref: Fraction
    delta_t: Fraction
    bound: Fraction

    @property
    def sigma(self) -> Fraction:
        return self.delta_ref - self.delta_t

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "delta_ref": fraction_text(self.delta_ref),
            "delta_t": fraction_text(self.delta_t),
            "sigma": fraction_text(self.sigma),
            "bound": fraction_text(self.bound),
        }


@dataclass
class CandidateReport:
    gamma: Polynomial
    case: CandidateCase
    steps: List[SigmaStep] = dc_field(default_factory=list)

    @property
    def first_violation(self) -> Optional[int]:
        return next((s.q for s in self.steps if s.sigma > 1), None)

    @property
    def certified(self) -> bool:
        return self.first_violation is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gamma": str(self.gamma),
            "C": self.case.C,
            "case": self.case.case,
            "sequence": self.case.sequence,
            "steps": [s.to_dict() for s in self.steps],
            "first_violation": self.first_violation,
            "certified": self.certified,
        }


def evaluate_candidate(params: ProbeParameters, gamma: Polynomial, max_q: Optional[int] = None) -> CandidateReport:
    """
    sigma_q along the sequence selected by the candidate's case, until sigma_q > 1.

    Args:
        params (ProbeParameters): the hypersurface
        gamma (Polynomial): t = y + gamma
        max_q (int): last q tried (default 3p)
    """
    case = classify_candidate(params, gamma)
    max_q = max_q if max_q is not None else 3 * params.p
    base = probe_label(params)
    frame = base.frame
    y = Polynomial.variable(frame, "y")
    # f written in t = y + gamma: substitute y -> y - gamma
    f_t = substitute(base.generators[0], {"y": y - gamma})
    t_label = Label.build(frame, [f_t])
    report = CandidateReport(gamma, case)
    ref = _sequence_labels(base, case.sequence, 0, prepared=True)[0]
    cand = _sequence_labels(t_label, case.sequence, 0, prepared=False)[0]
    chart = _first_chart(case.sequence)
    for q in range(max_q + 1):
        if q > 0:
            try:
                charted = point_chart(ref, chart)
                ref = prepare(charted, preparation_bound(charted))[0]
                cand = point_chart(cand, chart)
            except NonDivisible as e:
                logger.warning(f"candidate {gamma}: chart {q} undefined ({e})")
                break
        step = SigmaStep(q, _delta(ref), _delta(cand), lower_bound(params, case.sequence, q))
        report.steps.append(step)
        logger.debug(f"gamma = {gamma}, q = {q}: sigma = {fraction_text(step.sigma)}")
        if step.sigma > 1:
            break
    return report


@dataclass
class ProbeReport:
    params: ProbeParameters
    reference: Dict[str, List[SequenceStep]]
    candidates: List[CandidateReport]

    @property
    def certified(self) -> bool:
        return all(c.certified for c in self.candidates)

    def to_dict(self) -> Dict[str, Any]:
        delta = char_polyhedron(probe_label(self.params))
        level, _ = delta_face(delta)
        return {
            "parameters": self.params.to_dict(),
            "polynomial": str(probe_polynomial(self.params)),
            "polyhedron": {"vertices": [[fraction_text(x) for x in v] for v in delta.vertices],
                           "delta": fraction_text(level)},
            "sequences": {name: [s.to_dict() for s in steps] for name, steps in self.reference.items()},
            "candidates": [c.to_dict() for c in self.candidates],
            "certified": self.certified,
        }


def maximal_contact_probe(p: int, a: int, b: int, A: int, N: int,
                          gamma: Optional[Polynomial] = None, steps: int = 3) -> ProbeReport:
    """
    Run all three sequences and evaluate the built-in candidates (plus gamma, if given).

    Raises:
        BadParameters: the parameters violate the constraints on (p, a, b, A, N)
    """
    params = ProbeParameters(p, a, b, A, N)
    logger.info(f"maximal contact probe for {params.to_dict()}")
    reference = {name: reference_sequence(params, name, steps) for name in SEQUENCES}
    gammas = builtin_candidates(params)
    if gamma is not None:
        gammas.append(gamma.embed(probe_frame(params)))
    candidates = [evaluate_candidate(params, g) for g in gammas]
    for c in candidates:
        logger.info(f"gamma = {c.gamma}: sequence {c.case.sequence}, first violation q = {c.first_violation}")
    return ProbeReport(params, reference, candidates)
