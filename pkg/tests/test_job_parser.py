"""
Tests for the job language parser.
"""

import numpy as np
import pytest

from create_sample_jobs import random_job
from src.errors import InputError, JobSyntaxError, UndeclaredVariable
from src.fields import ExtensionField, PrimeField
from src.job_parser import parse_job, parse_polynomial
from src.utils.data_utils import load_job, save_job
from tests.conftest import FRAME_Q2, poly


@pytest.mark.parametrize("name", ["max_contact", "cusp", "nonrational_f3", "normalization", "boundary"])
def test_shipped_jobs_parse(jobs_dir, name):
    """Every sample job parses and round trips through its canonical text."""
    job = load_job(jobs_dir / f"{name}.job")
    assert job.generators
    again = parse_job(job.to_text())
    assert again.to_text() == job.to_text()
    assert again.generators == job.generators


def test_max_contact_job(jobs_dir):
    job = load_job(jobs_dir / "max_contact.job")
    assert job.field == PrimeField(3)
    assert job.frame.u_names == ("u1", "u2")
    assert job.to_label().orders == (3,)


def test_boundary_and_params(jobs_dir):
    job = load_job(jobs_dir / "boundary.job")
    component = job.boundary[0]
    assert component.ident == "D1"
    assert component.old
    assert component.generator == poly("y + u2^2")
    assert job.param_int("max_units") == 8
    assert job.param_int("missing", 5) == 5


def test_bad_param_value():
    job = parse_job("field Q\nvars y | u1\nf = y^2 + u1^3\nparam max_units = many\n")
    with pytest.raises(InputError):
        job.param_int("max_units")


def test_two_generator_job(jobs_dir):
    job = load_job(jobs_dir / "normalization.job")
    assert [name for name, _ in job.generators] == ["f1", "f2"]
    assert job.frame.y_names == ("y1", "y2")


def test_extension_field_generator_is_a_scalar():
    job = parse_job("field F_3[t^2 + 1]\nvars y | u1 u2\nf = y^2 + t*u1^2\n")
    assert isinstance(job.field, ExtensionField)
    assert job.field.degree == 2
    f = job.generators[0][1]
    assert f.coefficient((0,), (2, 0)) == job.field.generator


def test_operators():
    assert parse_polynomial("2 y u1", FRAME_Q2) == parse_polynomial("2*y*u1", FRAME_Q2)
    assert parse_polynomial("y**2", FRAME_Q2) == parse_polynomial("y^2", FRAME_Q2)
    assert parse_polynomial("(y^2 + u1)/2 * 2", FRAME_Q2) == parse_polynomial("y^2 + u1", FRAME_Q2)
    assert parse_polynomial("-u1 + u1", FRAME_Q2).is_zero()


def test_empty_u_block_position():
    with pytest.raises(JobSyntaxError) as info:
        parse_job("field Q\nvars y |\nf = y^2\n")
    assert (info.value.line, info.value.col) == (2, 9)


def test_undeclared_variable_position():
    with pytest.raises(UndeclaredVariable) as info:
        parse_job("field Q\nvars y | u1 u2\nf = y^2 + z\n")
    assert info.value.name == "z"
    assert (info.value.line, info.value.col) == (3, 11)


def test_unexpected_character_position():
    with pytest.raises(JobSyntaxError) as info:
        parse_job("field Q\nvars y | u1 u2\nf = y^2 $ u1\n")
    assert (info.value.line, info.value.col) == (3, 9)
    assert "'$'" in str(info.value)


@pytest.mark.parametrize("text", [
    "",
    "vars y | u1\n",
    "field R\nvars y | u1\n",
    "field F_4\nvars y | u1\n",
    "field Q\nvars y u1\n",
    "field Q\nvars y | y\n",
    "field Q\nvars y | u1\nf = y/u1\n",
    "field Q\nvars y | u1\nf = y^-1\n",
    "field Q\nvars y | u1\nf = (y + u1\n",
    "field Q\nvars y | u1\nboundary D1 y old\n",
    "field Q\n",
])
def test_syntax_errors(text):
    with pytest.raises(JobSyntaxError):
        parse_job(text)


def test_job_without_generators():
    job = parse_job("field Q\nvars y | u1\n")
    with pytest.raises(InputError):
        job.to_label()


def test_save_and_load(tmp_path, jobs_dir):
    job = load_job(jobs_dir / "cusp.job")
    path = tmp_path / "nested" / "cusp.job"
    save_job(job, path)
    assert load_job(path).generators == job.generators


def test_missing_job_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_job(tmp_path / "absent.job")


def test_random_sample_jobs_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(10):
        job = random_job(rng)
        assert parse_job(job.to_text()).generators == job.generators
        assert job.to_label().orders[0] in (2, 3)
