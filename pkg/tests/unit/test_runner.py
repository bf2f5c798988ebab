import csv
import json
import math

import pytest

from fock_phase import runner
from fock_phase.config import PhaseConfig, RunConfig, sweep_states
from fock_phase.datasets import UNDEFINED, read_csv_header
from fock_phase.errors import SlopeSingularError, ZeroStateError


def _config(command, tmp_path, name="out.csv", output_format="csv", **flags):
    params = {"kind": "add", "count": "1", "n": "1", "alpha": "1", "theta2": "0"} | flags
    states, sweep = sweep_states(**params)
    return RunConfig(
        command,
        states,
        sweep,
        grid_size=128,
        phi_points=16,
        output=tmp_path / name,
        output_format=output_format,
    )


def _rows(path):
    with path.open(encoding="utf-8") as f:
        lines = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(lines))


@pytest.mark.parametrize("command", ["phase-dist", "angular-q", "fluctuation", "dispersion", "estimate"])
def test_output_is_byte_identical(command, tmp_path):
    first = runner.run(_config(command, tmp_path, "first.csv", count="0..2"))
    second = runner.run(_config(command, tmp_path, "second.csv", count="0..2"))
    assert first.path.read_bytes() == second.path.read_bytes()


def test_header_records_the_run(tmp_path):
    result = runner.run(_config("phase-dist", tmp_path, count="0..3"))
    header = read_csv_header(result.path)
    assert header["command"] == "phase-dist"
    assert header["sweep"] == "count"
    assert [state["count"] for state in header["states"]] == [0, 1, 2, 3]
    assert len(header["dims"]) == 4
    assert header["tolerances"]["truncation_tolerance"] == 1e-12
    assert "version" in header


def test_phase_dist_rows(tmp_path):
    result = runner.run(_config("phase-dist", tmp_path))
    rows = _rows(result.path)
    assert list(rows[0]) == ["param", "theta", "density"]
    assert len(rows) == 128
    step = 2 * math.pi / len(rows)
    assert sum(float(row["density"]) for row in rows) * step == pytest.approx(1.0, abs=1e-9)
    assert float(rows[0]["theta"]) == pytest.approx(-math.pi)


def test_fluctuation_of_fock_state_is_undefined(tmp_path):
    result = runner.run(_config("fluctuation", tmp_path, count="0", alpha="0"))
    (row,) = _rows(result.path)
    assert row["U"] == UNDEFINED
    assert row["Q"] == UNDEFINED
    assert float(row["mean_n"]) == pytest.approx(1.0)
    assert float(row["S"]) == 0.0
    assert any("U undefined" in note for note in result.notes)
    assert read_csv_header(result.path)["notes"] == result.notes


def test_fluctuation_of_coherent_state(tmp_path):
    result = runner.run(_config("fluctuation", tmp_path, count="0", n="0", alpha="1"))
    (row,) = _rows(result.path)
    assert float(row["U"]) == pytest.approx(0.5, rel=1e-9)
    assert result.notes == []


def test_dispersion_columns_agree(tmp_path):
    result = runner.run(_config("dispersion", tmp_path, alpha="0:1:0.5"))
    rows = _rows(result.path)
    assert [float(row["param"]) for row in rows] == [0.0, 0.5, 1.0]
    assert result.dataset.column("param") == [0.0, 0.5, 1.0]
    assert len(result.dataset.column("D")) == 3
    for row in rows:
        assert float(row["D"]) == pytest.approx(float(row["D_quadrature"]), abs=1e-9)


def test_estimate_json(tmp_path):
    result = runner.run(
        _config("estimate", tmp_path, "estimate.json", output_format="json", alpha="0.1")
    )
    payload = json.loads(result.path.read_text(encoding="utf-8"))
    assert payload["columns"] == ["param", "phi", "var_jz", "slope", "delta_phi"]
    assert len(payload["rows"]) == 16
    assert payload["header"]["phi_points"] == 16
    assert all(row[4] > 0 for row in payload["rows"])


def test_default_output_path(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    states, sweep = sweep_states("add", "0", "0", "1", "0")
    result = runner.run(RunConfig("dispersion", states, sweep, grid_size=128))
    assert result.path == PhaseConfig().output_path("dispersion")
    assert (tmp_path / "datasets" / "dispersion.csv").exists()


def test_annihilated_state_fails_the_run(tmp_path):
    config = _config("fluctuation", tmp_path, kind="subtract", count="2", n="1", alpha="0")
    with pytest.raises(ZeroStateError):
        runner.run(config)
    assert not config.output.exists()


def test_verify_quick(tmp_path):
    config = RunConfig("verify", output=tmp_path / "verify.csv", suite="quick")
    result = runner.run(config)
    assert result.failures == 0
    rows = _rows(result.path)
    assert rows
    assert all(row["passed"] == "true" for row in rows)
    assert read_csv_header(result.path)["suite"]["name"] == "quick"


def test_estimate_of_vacuum_fails_the_run(tmp_path):
    config = _config("estimate", tmp_path, count="0", n="0", alpha="0")
    with pytest.raises(SlopeSingularError):
        runner.run(config)
    assert not config.output.exists()
