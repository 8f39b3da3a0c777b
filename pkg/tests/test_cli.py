"""
Tests for the command line front end: payloads, exit codes and the output schema.
"""

import json
import logging

import jsonschema
import pytest

from config.config import LOGGING_CONFIG, OUTPUT_SCHEMA_FILE
from main_resolver import main
from src.hilbert import HilbertPolynomial, compare, decompose
from tests.conftest import JOBS_DIR

SCHEMA = json.loads(OUTPUT_SCHEMA_FILE.read_text(encoding="utf-8"))


@pytest.fixture(autouse=True)
def isolated_logging(tmp_path, monkeypatch):
    """main() reconfigures the root logger; put it back afterwards."""
    monkeypatch.setitem(LOGGING_CONFIG, "file", str(tmp_path / "logs" / "run.log"))
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMA)
    return code, payload


def job(name: str) -> str:
    return str(JOBS_DIR / f"{name}.job")


def test_polyhedron_command(capsys):
    code, payload = run(capsys, "polyhedron", job("max_contact"))
    assert code == 0
    assert payload["command"] == "polyhedron"
    assert payload["polyhedron"]["vertices"] == [["2/3", "13/3"], ["14/3", "1/3"]]
    assert payload["polyhedron"]["delta"] == "5"
    assert payload["invariants"]["alpha"] == "2/3"
    assert payload["invariants"]["beta"] == "13/3"


def test_polyhedron_with_old_boundary(capsys):
    code, payload = run(capsys, "polyhedron", job("boundary"))
    assert code == 0
    assert "boundary_polyhedron" in payload


def test_ascii_plot(capsys):
    code, payload = run(capsys, "polyhedron", job("max_contact"), "--plot", "ascii")
    assert code == 0
    assert payload["plot"]["format"] == "ascii"
    assert "delta = 5" in payload["plot"]["text"]


def test_svg_plot(capsys, tmp_path):
    target = tmp_path / "delta.svg"
    code, payload = run(capsys, "polyhedron", job("max_contact"), "--plot", "svg", "--plot-path", str(target))
    assert code == 0
    assert payload["plot"] == {"format": "svg", "path": str(target)}
    assert target.read_text(encoding="utf-8").lstrip().startswith("<?xml")


def test_resolve_with_exports(capsys, tmp_path):
    excel, csv, saved = tmp_path / "cusp.xlsx", tmp_path / "cusp.csv", tmp_path / "cusp.json"
    code, payload = run(capsys, "resolve", job("cusp"), "--excel", str(excel), "--csv", str(csv),
                        "--output", str(saved))
    assert code == 0
    assert payload["status"] == "resolved"
    assert excel.exists() and csv.exists()
    assert json.loads(saved.read_text(encoding="utf-8")) == payload


def test_resolve_max_units_exit_code(capsys, tmp_path):
    path = tmp_path / "quartic.job"
    path.write_text("field Q\nvars y | u1 u2\nf = y^2 + u1^4\n", encoding="utf-8")
    code, payload = run(capsys, "resolve", str(path), "--max-units", "1")
    assert code == 2
    assert payload["status"] == "max-units"
    assert payload["ledger"][0]["unit"] == 1


def test_fundamental_command(capsys):
    code, payload = run(capsys, "fundamental", job("max_contact"))
    assert code == 0
    assert payload["length"] == 4
    assert payload["delta"] == "5"
    assert len(payload["trace"]) == 5


def test_prepare_command(capsys):
    code, payload = run(capsys, "prepare", job("cusp"))
    assert code == 0
    assert payload["bound"] == "3/2"
    assert payload["after"]["delta"] == "3/2"


def test_blowup_nonrational(capsys):
    code, payload = run(capsys, "blowup", job("nonrational_f3"), "--chart", "nonrational",
                        "--modulus", "u1^2 + u2^2")
    assert code == 0
    assert payload["defined"] is True
    assert payload["after"]["extension_degree"] == 2
    assert payload["after"]["vertices"] == [["2", "3/2"]]


def test_blowup_candidates(capsys):
    code, payload = run(capsys, "blowup", job("max_contact"), "--chart", "candidates")
    assert code == 0
    assert payload["candidates"]
    assert payload["state"]["delta"] == "5"


def test_blowup_translated_needs_phi(capsys):
    code, payload = run(capsys, "blowup", job("cusp"), "--chart", "translated")
    assert code == 3
    assert payload["error"]["type"] == "InputError"


def test_hilbert_of_ideal(capsys):
    code, payload = run(capsys, "hilbert", "--ideal", "x^2,x*y", "--vars", "x,y")
    assert code == 0
    assert payload["values"][:6] == [1, 2, 1, 1, 1, 1]
    assert payload["polynomial"] == "1"
    assert payload["a"] == "(0)"


def test_hilbert_compare(capsys):
    code, payload = run(capsys, "hilbert", "--polynomial", "T + 1", "--compare", "T + 2")
    P, Q = HilbertPolynomial.parse("T + 1"), HilbertPolynomial.parse("T + 2")
    assert code == 0
    assert payload["a"] == str(decompose(P))
    assert payload["order"] == compare(P, Q)


def test_hilbert_needs_input(capsys):
    code, payload = run(capsys, "hilbert")
    assert code == 3
    assert payload["error"]["exit_code"] == 3


def test_max_contact_command_rejects_parameters(capsys):
    code, payload = run(capsys, "probe-max-contact", "--N", "10")
    assert code == 3
    assert payload["error"]["type"] == "BadParameters"


@pytest.mark.slow
def test_max_contact_command_defaults(capsys):
    code, payload = run(capsys, "probe-max-contact")
    assert code == 0
    assert payload["certified"] is True
    assert payload["polyhedron"]["delta"] == "5"


def test_missing_job_file(capsys, tmp_path):
    code, payload = run(capsys, "polyhedron", str(tmp_path / "absent.job"))
    assert code == 3
    assert payload["error"]["type"] == "FileNotFoundError"


def test_syntax_error_reports_position(capsys, tmp_path):
    path = tmp_path / "broken.job"
    path.write_text("field Q\nvars y |\nf = y^2\n", encoding="utf-8")
    code, payload = run(capsys, "polyhedron", str(path))
    assert code == 3
    assert payload["error"]["type"] == "JobSyntaxError"
    assert "line 2, col 9" in payload["error"]["message"]
