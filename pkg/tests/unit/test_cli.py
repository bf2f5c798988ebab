import pytest
from invoke import Config, Context, Exit

from fock_phase.cli import tasks_phase, tasks_verify
from fock_phase.cli.tasks import namespace
from fock_phase.cli.tasks_utils import TableWriter, phase_errors
from fock_phase.datasets import read_csv_header
from fock_phase.errors import TruncationError, ZeroStateError


@pytest.fixture
def context():
    return Context(config=Config(overrides={"environment": None}))


def test_task_names():
    names = set(namespace.task_names)
    assert {"phase-dist", "angular-q", "fluctuation", "dispersion", "estimate", "verify"} <= names
    assert {"init", "run", "test", "ruff"} <= names


def test_phase_errors_carry_exit_codes():
    with pytest.raises(Exit) as info:
        with phase_errors():
            raise ZeroStateError("annihilated")
    assert info.value.code == 4
    with pytest.raises(Exit) as info:
        with phase_errors():
            raise TruncationError("no cutoff")
    assert info.value.code == 3


def test_fluctuation_task(context, tmp_path, capsys):
    output = tmp_path / "fock.csv"
    tasks_phase.fluctuation(context, count="0", n="2", alpha="0", output=str(output))
    out = capsys.readouterr().out
    assert "U undefined" in out
    assert "Wrote 1 rows" in out
    assert read_csv_header(output)["command"] == "fluctuation"


def test_invalid_flags_exit_with_code_two(context, tmp_path):
    with pytest.raises(Exit) as info:
        tasks_phase.phase_dist(context, count="0..2", n="0..2", output=str(tmp_path / "x.csv"))
    assert info.value.code == 2


def test_verify_task(context, capsys):
    tasks_verify.verify(context, suite="quick")
    assert "All checks passed" in capsys.readouterr().out


def test_verify_unknown_suite(context):
    with pytest.raises(Exit) as info:
        tasks_verify.verify(context, suite="nightly")
    assert info.value.code == 1


def test_table_writer(capsys):
    TableWriter(["Check", "Status"], [["fidelity", "ok"], ["U/oracle", "FAIL"]]).write_table()
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("Check    | Status")
    assert lines[1].startswith("-" * len("fidelity"))
    assert len(lines) == 5
