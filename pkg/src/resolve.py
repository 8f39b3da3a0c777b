"""
Local Resolution Driver

Runs fundamental sequences and fundamental units of blow-ups over a label
and keeps the ledger of the invariants that force termination:

- fundamental_sequence: point chart at the origin, then curve charts while
  the generic point of the centre stays very near
- run_unit: a point chart, preparation, then curve charts along the new
  exceptional divisor
- resolve_driver: prepare, enumerate near points, run a unit per candidate,
  follow one, check the beta^O / zeta^O ledger
"""

import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from config.config import DRIVER_CONFIG
from src.algebra import order_mod_u
from src.blowup import (
    ChartKind,
    ChartSpec,
    Nearness,
    NearnessKind,
    apply_chart,
    classify_nearness,
    curve_chart,
    near_point_charts,
    point_chart,
)
from src.charpoly import Label, boundary_polyhedron, char_polyhedron
from src.errors import (
    EmptyPolyhedron,
    Inconclusive,
    InvariantViolation,
    LedgerViolation,
    MonotonicityViolation,
    NonDivisible,
    NonTermination,
    NotPrepared,
)
from src.polyhedron import (
    FSubset,
    Invariants2,
    Point,
    delta_face,
    delta_value,
    fraction_text,
    invariants2,
    project,
)
from src.preparation import PrepReport, is_prepared_along, prepare

logger = logging.getLogger(__name__)


def _text(x) -> Optional[str]:
    return None if x is None else fraction_text(x)


@dataclass(frozen=True)
class Snapshot:
    """
    Invariants of a label, recomputed from scratch.

    Args:
        vertices (Tuple[Point, ...]): vertices of Delta
        delta: delta(Delta), inf when empty
        orders (Tuple[int, ...]): n_i
        extension_degree (int): [k : F_p], 1 over Q
        invariants (Invariants2): alpha..zeta of Delta (e = 2, non-empty)
        boundary_invariants (Invariants2): the same for Delta^O
        generic_delta: delta of Delta(f, y, u_1)
        projection_ok (bool): Delta(f, y, u_1) == pi_1(Delta)
    """

    vertices: Tuple[Point, ...]
    delta: Any
    orders: Tuple[int, ...]
    extension_degree: int
    invariants: Optional[Invariants2] = None
    boundary_invariants: Optional[Invariants2] = None
    generic_delta: Any = None
    projection_ok: Optional[bool] = None

    @classmethod
    def of(cls, label: Label) -> "Snapshot":
        delta = char_polyhedron(label)
        inv = binv = None
        if label.e == 2 and not delta.is_empty:
            inv = invariants2(delta)
            old = boundary_polyhedron(label) if label.old_boundary() else delta
            binv = invariants2(old) if not old.is_empty else None
        generic = char_polyhedron(label, s=1)
        return cls(
            vertices=delta.vertices,
            delta=delta_value(delta),
            orders=label.orders,
            extension_degree=label.field.degree,
            invariants=inv,
            boundary_invariants=binv,
            generic_delta=delta_value(generic),
            projection_ok=generic == project(delta, 1),
        )

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def _o(self, name: str):
        return None if self.boundary_invariants is None else getattr(self.boundary_invariants, name)

    @property
    def beta_O(self):
        return self._o("beta")

    @property
    def alpha_O(self):
        return self._o("alpha")

    @property
    def epsilon_O(self):
        return self._o("epsilon")

    @property
    def zeta_O(self):
        return self._o("zeta")

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "vertices": [[fraction_text(x) for x in v] for v in self.vertices],
            "delta": fraction_text(self.delta),
            "orders": list(self.orders),
            "extension_degree": self.extension_degree,
            "generic_delta": _text(self.generic_delta),
            "projection_ok": self.projection_ok,
        }
        if self.invariants is not None:
            data["invariants"] = self.invariants.to_dict()
        if self.boundary_invariants is not None:
            data["boundary_invariants"] = self.boundary_invariants.to_dict()
        return data


@dataclass(frozen=True)
class TraceStep:
    index: int
    action: str
    snapshot: Snapshot
    chart: Optional[ChartSpec] = None
    nearness: Optional[Nearness] = None
    preparation: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"index": self.index, "action": self.action, "state": self.snapshot.to_dict()}
        if self.chart is not None:
            data["chart"] = self.chart.to_dict()
        if self.nearness is not None:
            data["nearness"] = self.nearness.to_dict()
        if self.preparation is not None:
            data["preparation"] = self.preparation
        return data


def _renumber(steps: List[TraceStep], start: int) -> List[TraceStep]:
    return [TraceStep(start + i, s.action, s.snapshot, s.chart, s.nearness, s.preparation)
            for i, s in enumerate(steps)]


# --- fundamental sequence -------------------------------------------------------

def fundamental_sequence(label: Label) -> Tuple[int, List[TraceStep]]:
    """
    Length m of the fundamental sequence over the origin.

    The first blow-up is the point chart at u1; the following ones blow up
    (y, u1), measured at the generic point where u2 is a unit. The length
    satisfies m < delta <= m + 1.

    Args:
        label (Label): a delta-prepared label

    Returns:
        Tuple[int, List[TraceStep]]: m and the states along the sequence

    Raises:
        EmptyPolyhedron: Delta is empty (resolved, or a singular curve)
        NotPrepared: the label is not prepared along its delta-face
    """
    delta = char_polyhedron(label)
    if delta.is_empty:
        raise EmptyPolyhedron("Delta is empty: resolved or singular curve, no fundamental sequence")
    level, face = delta_face(delta)
    if not is_prepared_along(label, face):
        raise NotPrepared("fundamental_sequence needs a label prepared along its delta-face")
    if label.old_boundary():
        logger.warning("old boundary components are ignored by the fundamental sequence")

    trace = [TraceStep(0, "start", Snapshot.of(label))]
    if level <= 1:
        return 0, trace

    current = point_chart(label, ChartSpec.point_u1())
    trace.append(TraceStep(1, "point-chart", Snapshot.of(current), ChartSpec.point_u1()))
    q = 1
    while trace[-1].snapshot.generic_delta > 1:
        current = curve_chart(current, 0)
        q += 1
        trace.append(TraceStep(q, "curve-chart", Snapshot.of(current), ChartSpec.curve(0)))
        expected = level - q
        if trace[-1].snapshot.generic_delta != expected and expected > 1:
            raise InvariantViolation(f"generic delta {fraction_text(trace[-1].snapshot.generic_delta)} "
                                     f"after {q} blow-ups, expected {fraction_text(expected)}")
    m = q
    if not (m < level <= m + 1):
        raise InvariantViolation(f"length law fails: m = {m}, delta = {fraction_text(level)}")
    logger.info(f"fundamental sequence of length {m} for delta = {fraction_text(level)}")
    return m, trace


# --- fundamental units ----------------------------------------------------------

@dataclass
class UnitRecord:
    """
    One fundamental unit: a point chart followed by curve charts.

    Attributes:
        chart (ChartSpec): the point chart that starts the unit
        start (Snapshot): invariants before
        end (Snapshot): invariants after
        length (int): number of blow-ups m (point chart included)
        nearness (Nearness): of the point after the point chart
        steps (List[TraceStep]): states along the unit
        label (Label): terminal label
        monotone (bool): beta^O did not increase
    """

    chart: ChartSpec
    start: Snapshot
    end: Snapshot
    length: int
    nearness: Nearness
    steps: List[TraceStep]
    label: Label
    monotone: bool = True

    @property
    def extension_degree(self) -> int:
        return self.end.extension_degree // max(self.start.extension_degree, 1)

    @property
    def beta_O_before(self):
        return self.start.beta_O

    @property
    def beta_O_after(self):
        return self.end.beta_O

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chart": self.chart.to_dict(),
            "length": self.length,
            "nearness": self.nearness.to_dict(),
            "extension_degree": self.extension_degree,
            "beta_O_before": _text(self.beta_O_before),
            "beta_O_after": _text(self.beta_O_after),
            "monotone": self.monotone,
            "start": self.start.to_dict(),
            "end": self.end.to_dict(),
            "steps": [s.to_dict() for s in self.steps],
        }


def preparation_bound(label: Label):
    """alpha + beta for e = 2, delta otherwise; 0 for an empty polyhedron."""
    delta = char_polyhedron(label)
    if delta.is_empty:
        return Fraction(0)
    if label.e == 2:
        inv = invariants2(delta)
        return inv.alpha + inv.beta
    return delta_value(delta)


def _prepared(label: Label) -> Tuple[Label, PrepReport]:
    return prepare(label, preparation_bound(label))


def _min_coordinate(delta: FSubset, index: int):
    if delta.is_empty:
        return math.inf
    return min(v[index] for v in delta.vertices)


def _check_monotone(chart: ChartSpec, start: Snapshot, end: Snapshot, isolated: bool) -> bool:
    before, after = start.beta_O, end.beta_O
    if before is None or after is None:
        return True
    if after > before:
        # point-u2 only bounds beta' by beta + alpha - 1
        if chart.kind is ChartKind.POINT_U2 and start.alpha_O >= 1 and not isolated:
            logger.warning(f"beta^O rose {fraction_text(before)} -> {fraction_text(after)} "
                           f"under point-u2 with alpha^O >= 1")
            return False
        raise MonotonicityViolation(f"beta^O rose from {fraction_text(before)} to {fraction_text(after)} "
                                    f"in unit {chart.describe()}")
    if isolated and chart.kind is ChartKind.POINT_NONRATIONAL and not after < before:
        raise MonotonicityViolation(f"beta^O did not drop across non-rational unit {chart.describe()}: "
                                    f"{fraction_text(before)}")
    return True


def run_unit(label: Label, chart: ChartSpec, isolated: bool = False) -> UnitRecord:
    """
    Point chart, preparation, then curve charts while the centre stays very near.

    The curve is (y, u1) after point-u1 style charts and (y, u2) after
    point-u2; it is blown up while the minimum of the matching coordinate
    over Delta exceeds 1.

    Args:
        label (Label): prepared label at the centre
        chart (ChartSpec): the point chart
        isolated (bool): no permissible curve through the point is assumed

    Returns:
        UnitRecord: the unit with its ledger entries

    Raises:
        NonDivisible: the chart is undefined for this label
        MonotonicityViolation: beta^O increased
        NonTermination: preparation or the curve loop ran away
    """
    if not chart.is_point:
        raise InvariantViolation("a unit starts with a point chart")
    start = Snapshot.of(label)
    steps = [TraceStep(0, "start", start)]
    charted = point_chart(label, chart)
    current, report = _prepared(charted)
    nearness = classify_nearness(current, prepared=not report.undecided, orders_in=label.orders)
    steps.append(TraceStep(1, "point-chart", Snapshot.of(current), chart, nearness, report.to_dict()))
    length = 1
    if nearness.near and label.e >= 2:
        index = chart.exceptional_index()
        while _min_coordinate(char_polyhedron(current), index) > 1:
            if length >= DRIVER_CONFIG["max_unit_length"]:
                raise NonTermination(f"unit {chart.describe()} exceeded {length} blow-ups")
            current, report = _prepared(curve_chart(current, index))
            length += 1
            steps.append(TraceStep(length, "curve-chart", Snapshot.of(current), ChartSpec.curve(index),
                                   None, report.to_dict()))
    end = steps[-1].snapshot
    monotone = _check_monotone(chart, start, end, isolated) if nearness.near else True
    logger.info(f"unit {chart.describe()}: length {length}, {nearness.kind.value}, "
                f"beta^O {_text(start.beta_O)} -> {_text(end.beta_O)}")
    return UnitRecord(chart, start, end, length, nearness, steps, current, monotone)


# --- driver ---------------------------------------------------------------------

@dataclass
class Candidate:
    chart: ChartSpec
    nearness: Nearness
    unit: Optional[UnitRecord] = None
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"chart": self.chart.to_dict(), "nearness": self.nearness.to_dict()}
        if self.unit is not None:
            data.update({
                "length": self.unit.length,
                "beta_O_after": _text(self.unit.beta_O_after),
                "delta_after": fraction_text(self.unit.end.delta),
            })
        if self.error:
            data["error"] = self.error
        return data


@dataclass
class LedgerEntry:
    unit: int
    beta_O_before: Any
    beta_O_after: Any
    zeta_O_before: Any
    zeta_O_after: Any
    epsilon_O: Any
    length: int
    quantized: bool
    isolation_consistent: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "unit": self.unit,
            "beta_O_before": _text(self.beta_O_before),
            "beta_O_after": _text(self.beta_O_after),
            "zeta_O_before": _text(self.zeta_O_before),
            "zeta_O_after": _text(self.zeta_O_after),
            "epsilon_O": _text(self.epsilon_O),
            "length": self.length,
            "quantized": self.quantized,
            "isolation_consistent": self.isolation_consistent,
        }


@dataclass
class DriverTrace:
    status: str = "running"
    steps: List[TraceStep] = dc_field(default_factory=list)
    units: List[UnitRecord] = dc_field(default_factory=list)
    candidates: List[List[Candidate]] = dc_field(default_factory=list)
    ledger: List[LedgerEntry] = dc_field(default_factory=list)
    label: Optional[Label] = None

    def append(self, steps: List[TraceStep]) -> None:
        self.steps.extend(_renumber(steps, len(self.steps)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "steps": [s.to_dict() for s in self.steps],
            "units": [u.to_dict() for u in self.units],
            "candidates": [[c.to_dict() for c in round_] for round_ in self.candidates],
            "ledger": [e.to_dict() for e in self.ledger],
        }


def _quantum(label: Label) -> int:
    """n_N! with n_N the largest order among generators and old boundary components."""
    orders = list(label.orders)
    for comp in label.old_boundary():
        n = order_mod_u(comp.generator)
        if n != math.inf:
            orders.append(int(n))
    return math.factorial(max(orders))


def _ledger_entry(number: int, unit: UnitRecord, isolated: bool) -> LedgerEntry:
    start, end = unit.start, unit.end
    quantum = _quantum(unit.label)
    quantized = all(x is None or (Fraction(x) * quantum).denominator == 1
                    for x in (start.beta_O, end.beta_O))
    if not quantized:
        raise LedgerViolation(f"beta^O outside (1/{quantum})Z in unit {number}")
    entry = LedgerEntry(number, start.beta_O, end.beta_O, start.zeta_O, end.zeta_O,
                        start.epsilon_O, unit.length, quantized)
    if isolated and start.alpha_O is not None:
        entry.isolation_consistent = start.alpha_O < 1 and start.epsilon_O < 1
        if not entry.isolation_consistent:
            logger.warning(f"unit {number}: alpha^O = {fraction_text(start.alpha_O)}, "
                           f"epsilon^O = {fraction_text(start.epsilon_O)}; isolation flag looks wrong")
        if (unit.chart.kind is ChartKind.POINT_U1 and start.beta_O == end.beta_O
                and end.zeta_O is not None):
            expected = start.zeta_O + start.epsilon_O - unit.length
            if end.zeta_O != expected:
                raise LedgerViolation(f"zeta^O recurrence fails in unit {number}: "
                                      f"{fraction_text(end.zeta_O)} != {fraction_text(expected)}")
    return entry


def resolve_driver(label: Label, max_units: Optional[int] = None, isolated: bool = False) -> DriverTrace:
    """
    Follow fundamental units until the multiplicity drops.

    Each round prepares the label, enumerates candidate near points, runs a
    unit for every candidate and follows the near one with the largest
    (beta^O after, delta after), earliest first on ties.

    Args:
        label (Label): the starting label
        max_units (int): stop after this many units (default from DRIVER_CONFIG)
        isolated (bool): assume no permissible curve through the points

    Returns:
        DriverTrace: status 'empty', 'resolved' or 'max-units', with trace and ledger

    Raises:
        Inconclusive: solvability was undecided during preparation
        LedgerViolation: a ledger identity failed
    """
    max_units = max_units or DRIVER_CONFIG["max_units"]
    trace = DriverTrace()
    trace.append([TraceStep(0, "start", Snapshot.of(label))])
    current = label
    while True:
        delta = char_polyhedron(current)
        if delta.is_empty:
            trace.status = "empty"
            logger.info("Delta is empty: resolved or singular curve")
            break
        if delta_value(delta) <= 1:
            trace.status = "resolved"
            break
        prepared, report = _prepared(current)
        if report.undecided:
            raise Inconclusive(f"solvability undecided at {report.to_dict()['undecided']}")
        if report.steps and prepared != current:
            trace.append([TraceStep(0, "prepare", Snapshot.of(prepared), preparation=report.to_dict())])
        current = prepared
        if delta_value(char_polyhedron(current)) <= 1:
            trace.status = "resolved"
            break

        round_: List[Candidate] = []
        for chart in near_point_charts(current):
            try:
                unit = run_unit(current, chart, isolated)
            except NonDivisible as e:
                round_.append(Candidate(chart, Nearness(NearnessKind.NOT_NEAR), error=str(e)))
                continue
            round_.append(Candidate(chart, unit.nearness, unit))
        trace.candidates.append(round_)

        near = [(i, c.unit) for i, c in enumerate(round_) if c.unit is not None and c.nearness.near]
        if not near:
            first = next((c.unit for c in round_ if c.unit is not None), None)
            if first is not None:
                trace.append(first.steps[1:2])
            trace.status = "resolved"
            logger.info("no near point left: multiplicity drops")
            break

        def rank(item):
            i, unit = item
            beta = unit.beta_O_after if unit.beta_O_after is not None else Fraction(-1)
            return (beta, unit.end.delta, -i)

        _, chosen = max(near, key=rank)
        trace.ledger.append(_ledger_entry(len(trace.units) + 1, chosen, isolated))
        trace.units.append(chosen)
        trace.append(chosen.steps[1:])
        current = chosen.label
        if len(trace.units) >= max_units:
            trace.status = "max-units"
            logger.warning(f"driver stopped after {max_units} units")
            break
    trace.label = current
    logger.info(f"driver finished: {trace.status} after {len(trace.units)} units")
    return trace


def chart_step(label: Label, chart: ChartSpec) -> Dict[str, Any]:
    """Apply one chart and report invariants before and after."""
    before = Snapshot.of(label)
    try:
        after_label = apply_chart(label, chart)
    except NonDivisible as e:
        return {"chart": chart.to_dict(), "before": before.to_dict(), "defined": False, "reason": str(e),
                "nearness": Nearness(NearnessKind.NOT_NEAR).to_dict()}
    nearness = classify_nearness(after_label, prepared=False, orders_in=label.orders)
    return {
        "chart": chart.to_dict(),
        "defined": True,
        "before": before.to_dict(),
        "after": Snapshot.of(after_label).to_dict(),
        "nearness": nearness.to_dict(),
        "label": after_label.to_dict(),
    }
