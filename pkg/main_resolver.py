#!/usr/bin/env python3
"""
Characteristic Polyhedron Resolver - Main Application

Reads a job file (field, variables, generators, boundary) and runs one of the
local resolution operations on it: the characteristic polyhedron and its
invariants, vertex preparation, a single blow-up chart, the resolution driver
or a fundamental sequence. Two commands take their input from flags instead:
`hilbert` (Hilbert functions of monomial ideals) and `probe-max-contact`
(the non-existence of maximal contact example).

Results are printed to stdout as JSON with exact fraction strings; logs and
the summary banner go to stderr.

Usage:
    python main_resolver.py polyhedron data/jobs/max_contact.job --plot ascii
    python main_resolver.py resolve data/jobs/cusp.job --excel output/cusp.xlsx
    python main_resolver.py hilbert --ideal "x^2,x*y" --vars x,y
    python main_resolver.py probe-max-contact --p 3 --a 2 --b 1 --A 4 --N 36
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from config.config import LOGGING_CONFIG, OUTPUT_DIR, PROBE_DEFAULTS
from src.blowup import ChartSpec, near_point_charts
from src.charpoly import Label, boundary_polyhedron, char_polyhedron, delta_criteria, essential_points
from src.errors import EmptyPolyhedron, InputError, ResolutionError
from src.hilbert import HilbertPolynomial, compare, decompose, hilbert_report, parse_monomial_ideal
from src.job_parser import parse_polynomial
from src.max_contact import ProbeParameters, maximal_contact_probe, probe_frame
from src.polyhedron import FSubset, delta_face, delta_value, fraction_text, invariants2
from src.preparation import prepare
from src.report_generator import ReportGenerator
from src.resolve import Snapshot, chart_step, fundamental_sequence, preparation_bound, resolve_driver
from src.trace_excel_exporter import TraceExcelExporter
from src.utils.data_utils import load_job, save_json, save_table

CHART_CHOICES = ("point-u1", "point-u2", "translated", "nonrational", "curve-u1", "curve-u2")

logger = logging.getLogger(__name__)


def setup_logging(log_level: str = LOGGING_CONFIG["level"]):
    """Set up logging: stderr (stdout carries the JSON) and the log file."""
    log_file = Path(LOGGING_CONFIG["file"])
    log_file.parent.mkdir(parents=True, exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format=LOGGING_CONFIG["format"],
        handlers=[
            logging.StreamHandler(sys.stderr),
            logging.FileHandler(log_file),
        ],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--log-level', default=LOGGING_CONFIG["level"].upper(),
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level (default: INFO)')
    common.add_argument('--output', help='Also save the JSON payload to this path')

    job_common = argparse.ArgumentParser(add_help=False)
    job_common.add_argument('job', help='Path to a .job file')
    job_common.add_argument('--plot', choices=['svg', 'ascii'],
                            help='Draw the polyhedron (e = 2 only)')
    job_common.add_argument('--plot-path', help='Where to write the SVG drawing')
    job_common.add_argument('--excel', help='Write the trace tables to this workbook')
    job_common.add_argument('--csv', help='Write the trace table to this CSV file')

    parser = argparse.ArgumentParser(
        description="Characteristic polyhedra and local resolution of two-dimensional singularities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # Polyhedron and invariants, with a character drawing
    python main_resolver.py polyhedron data/jobs/max_contact.job --plot ascii

    # Run the driver and export the trace
    python main_resolver.py resolve data/jobs/cusp.job --excel output/cusp.xlsx

    # One chart
    python main_resolver.py blowup data/jobs/nonrational_f3.job --chart nonrational --modulus "u1^2 + u2^2"

    # Hilbert function of a monomial ideal
    python main_resolver.py hilbert --ideal "x^2,x*y" --vars x,y

    # The maximal contact probe
    python main_resolver.py probe-max-contact --p 3 --a 2 --b 1 --A 4 --N 36
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('polyhedron', parents=[common, job_common], help='Delta(f,y,u) and its invariants')

    prep = sub.add_parser('prepare', parents=[common, job_common], help='Prepare vertices up to a bound')
    prep.add_argument('--bound', help='Prepare vertices with |v| <= BOUND (default: alpha + beta, or delta)')

    blow = sub.add_parser('blowup', parents=[common, job_common], help='Apply one chart')
    blow.add_argument('--chart', default='point-u1', choices=CHART_CHOICES + ('candidates',),
                      help="Chart to apply; 'candidates' lists the near point charts")
    blow.add_argument('--phi', help='Translation for --chart translated (new u2 = u2 + phi*u1)')
    blow.add_argument('--modulus', help='Irreducible form Phi(u1,u2) for --chart nonrational')

    res = sub.add_parser('resolve', parents=[common, job_common], help='Run the resolution driver')
    res.add_argument('--max-units', type=int, help='Stop after this many units')
    res.add_argument('--isolated', action='store_true',
                     help='Assume no permissible curve passes through the points')

    sub.add_parser('fundamental', parents=[common, job_common], help='Fundamental sequence over the origin')

    hil = sub.add_parser('hilbert', parents=[common], help='Hilbert functions and polynomials')
    hil.add_argument('--ideal', help='Monomial generators, e.g. "x^2,x*y"')
    hil.add_argument('--vars', help='Comma separated variable names, e.g. x,y')
    hil.add_argument('--t', type=int, default=0, help='Number of summations H^(t) (default: 0)')
    hil.add_argument('--polynomial', help='Decompose a Hilbert polynomial in T instead')
    hil.add_argument('--compare', help='Compare --polynomial with this polynomial')

    probe = sub.add_parser('probe-max-contact', parents=[common], help='Maximal contact probe')
    for name in ('p', 'a', 'b', 'A', 'N'):
        probe.add_argument(f'--{name}', type=int, default=PROBE_DEFAULTS[name],
                           help=f'Parameter {name} (default: {PROBE_DEFAULTS[name]})')
    probe.add_argument('--gamma', help='Extra candidate gamma in u1, u2')
    probe.add_argument('--steps', type=int, default=3, help='Reference sequence length (default: 3)')
    return parser


# --- commands ---------------------------------------------------------------------

def polyhedron_payload(label: Label) -> Dict[str, Any]:
    delta = char_polyhedron(label)
    payload: Dict[str, Any] = {
        "label": label.to_dict(),
        "polyhedron": dict(delta.to_dict(), delta=fraction_text(delta_value(delta))),
    }
    if delta.is_empty:
        logger.info("Delta is empty: resolved or singular curve")
        return payload
    _, face = delta_face(delta)
    payload["delta_face"] = face.to_dict()
    payload["essential_points"] = [[fraction_text(x) for x in q] for q in essential_points(label)]
    payload["criteria"] = delta_criteria(label).to_dict()
    if label.e == 2:
        payload["invariants"] = invariants2(delta).to_dict()
    if label.old_boundary():
        old = boundary_polyhedron(label)
        payload["boundary_polyhedron"] = dict(old.to_dict(), delta=fraction_text(delta_value(old)))
    return payload


def run_prepare(label: Label, bound: Optional[str]) -> Dict[str, Any]:
    M = preparation_bound(label) if bound is None else parse_bound(bound)
    prepared, report = prepare(label, M)
    return {
        "bound": fraction_text(M),
        "before": Snapshot.of(label).to_dict(),
        "after": Snapshot.of(prepared).to_dict(),
        "preparation": report.to_dict(),
        "label": prepared.to_dict(),
    }


def parse_bound(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--bound must be a rational number, got {text!r}")


def chart_from_args(label: Label, args) -> ChartSpec:
    if args.chart == 'point-u1':
        return ChartSpec.point_u1()
    if args.chart == 'point-u2':
        return ChartSpec.point_u2()
    if args.chart.startswith('curve-u'):
        return ChartSpec.curve(int(args.chart[len('curve-u'):]) - 1)
    if args.chart == 'translated':
        if not args.phi:
            raise InputError("--chart translated needs --phi")
        return ChartSpec.translated(parse_polynomial(args.phi, label.frame))
    if not args.modulus:
        raise InputError("--chart nonrational needs --modulus")
    return ChartSpec.nonrational(parse_polynomial(args.modulus, label.frame))


def run_blowup(label: Label, args) -> Dict[str, Any]:
    if args.chart == 'candidates':
        return {"state": Snapshot.of(label).to_dict(),
                "candidates": [c.to_dict() for c in near_point_charts(label)]}
    return chart_step(label, chart_from_args(label, args))


def run_fundamental(label: Label) -> Dict[str, Any]:
    delta = char_polyhedron(label)
    if delta.is_empty:
        raise EmptyPolyhedron("Delta is empty: resolved or singular curve, no fundamental sequence")
    prepared, report = prepare(label, delta_value(delta))
    m, trace = fundamental_sequence(prepared)
    return {
        "length": m,
        "delta": fraction_text(delta_value(delta)),
        "preparation": report.to_dict(),
        "trace": [s.to_dict() for s in trace],
    }


def run_hilbert(args) -> Dict[str, Any]:
    if args.polynomial:
        P = HilbertPolynomial.parse(args.polynomial)
        a = decompose(P)
        payload: Dict[str, Any] = {"polynomial": str(P), "a": str(a), "a_parts": a.to_list()}
        if args.compare:
            Q = HilbertPolynomial.parse(args.compare)
            payload.update({"other": str(Q), "other_a": str(decompose(Q)), "order": compare(P, Q)})
        return payload
    if not args.ideal or not args.vars:
        raise InputError("hilbert needs --ideal and --vars, or --polynomial")
    names = [v.strip() for v in args.vars.split(",") if v.strip()]
    generators = parse_monomial_ideal(args.ideal, names)
    return dict(hilbert_report(generators, len(names), args.t), ideal=args.ideal, vars=names)


def run_probe(args) -> Dict[str, Any]:
    gamma = None
    if args.gamma:
        params = ProbeParameters(args.p, args.a, args.b, args.A, args.N)
        gamma = parse_polynomial(args.gamma, probe_frame(params))
    report = maximal_contact_probe(args.p, args.a, args.b, args.A, args.N, gamma=gamma, steps=args.steps)
    return report.to_dict()


def plot_payload(label: Label, args, reporter: ReportGenerator) -> Dict[str, Any]:
    delta: FSubset = char_polyhedron(label)
    if args.plot == 'ascii':
        return {"format": "ascii", "text": reporter.ascii_plot(delta)}
    path = args.plot_path or str(OUTPUT_DIR / f"{Path(args.job).stem}_{args.command}.svg")
    reporter.plot_polyhedron(delta, path, title=Path(args.job).stem)
    return {"format": "svg", "path": path}


def dispatch(args) -> Tuple[Dict[str, Any], int]:
    """Run one command; returns the payload and the exit code."""
    if args.command == 'hilbert':
        return run_hilbert(args), 0
    if args.command == 'probe-max-contact':
        payload = run_probe(args)
        return payload, 0 if payload["certified"] else 2

    job = load_job(args.job)
    label = job.to_label()
    code = 0
    if args.command == 'polyhedron':
        payload = polyhedron_payload(label)
    elif args.command == 'prepare':
        payload = run_prepare(label, args.bound)
    elif args.command == 'blowup':
        payload = run_blowup(label, args)
    elif args.command == 'resolve':
        trace = resolve_driver(label, max_units=args.max_units or job.param_int("max_units"),
                               isolated=args.isolated)
        payload = trace.to_dict()
        code = 2 if trace.status == "max-units" else 0
    else:
        payload = run_fundamental(label)

    reporter = ReportGenerator(payload)
    if args.plot:
        payload["plot"] = plot_payload(label, args, reporter)
    if args.excel:
        TraceExcelExporter().create_trace_report(reporter.tables(), args.excel)
    if args.csv:
        save_table(reporter.trace_table(), args.csv)
    return payload, code


def print_summary(command: str, payload: Dict[str, Any], code: int):
    """Human-readable banner on stderr."""
    out = sys.stderr
    print("\n" + "=" * 60, file=out)
    print(f"{command.upper()} COMPLETE", file=out)
    print("=" * 60, file=out)
    if "status" in payload:
        print(f"Status: {payload['status']}", file=out)
        print(f"Units followed: {len(payload.get('units', []))}", file=out)
    if "length" in payload:
        print(f"Fundamental sequence length: {payload['length']}", file=out)
    if "polyhedron" in payload and "vertices" in payload["polyhedron"]:
        vertices = " ".join("(" + ",".join(v) + ")" for v in payload["polyhedron"]["vertices"])
        print(f"Vertices: {vertices or '<empty>'}", file=out)
        print(f"delta: {payload['polyhedron']['delta']}", file=out)
    if "certified" in payload:
        for c in payload["candidates"]:
            print(f"  gamma = {c['gamma']}: sequence {c['sequence']}, first violation q = {c['first_violation']}",
                  file=out)
    print("=" * 60, file=out)
    print("[SUCCESS] Done" if code == 0 else f"[WARNING] Finished with exit code {code}", file=out)


def main(argv: Optional[List[str]] = None) -> int:
    """Main application function; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(args.log_level)

    try:
        logger.info(f"Running {args.command}")
        payload, code = dispatch(args)
        payload = dict({"command": args.command}, **payload)
        print(json.dumps(payload, indent=2))
        if args.output:
            save_json(payload, args.output)
        print_summary(args.command, payload, code)
        logger.info(f"{args.command} finished with exit code {code}")
        return code

    except (ResolutionError, FileNotFoundError) as e:
        code = e.exit_code if isinstance(e, ResolutionError) else 3
        logger.error(f"{args.command} failed: {str(e)}")
        print(json.dumps({"command": args.command,
                          "error": {"type": type(e).__name__, "message": str(e), "exit_code": code}}, indent=2))
        print(f"\n[ERROR] {args.command} failed: {str(e)}", file=sys.stderr)
        return code
    except Exception as e:
        logger.exception(f"{args.command} failed: {str(e)}")
        print(f"\n[ERROR] {args.command} failed: {str(e)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
