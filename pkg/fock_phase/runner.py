"""Turn a RunConfig into a dataset file."""

import dataclasses
from pathlib import Path

from fock_phase import interferometry, phase, verify
from fock_phase.config import PhaseConfig, RunConfig
from fock_phase.datasets import Dataset, write_dataset
from fock_phase.errors import TruncationError
from fock_phase.states import build_state

DENSITY_TOLERANCE = 1e-6


@dataclasses.dataclass
class RunResult:
    dataset: Dataset
    path: Path
    notes: list[str] = dataclasses.field(default_factory=list)
    failures: int = 0


def _check_density(distribution: phase.PhaseDistribution, label: str):
    integral = distribution.integral()
    if abs(integral - 1.0) > DENSITY_TOLERANCE:
        raise TruncationError(
            f"{label}: {distribution.source} integrates to {integral:.9f}, not 1"
        )


def _header(config: RunConfig, settings: PhaseConfig, dims: list[int]) -> dict:
    return {
        "command": config.command,
        "states": [spec.as_record() for _, spec in config.states],
        "dims": dims,
        "sweep": config.sweep,
        "grid_size": config.grid_size,
        "phi_points": config.phi_points,
        "tolerances": settings.tolerances(),
    }


def _phase_dist(config, settings, states, result):
    dataset = result.dataset
    for (param, spec), state in zip(config.states, states):
        distribution = phase.phase_distribution(state, config.grid_size, spec)
        _check_density(distribution, str(spec))
        for theta, value in zip(distribution.theta_grid, distribution.density):
            dataset.add_row(param, float(theta), float(value))


def _angular_q(config, settings, states, result):
    dataset = result.dataset
    for (param, spec), state in zip(config.states, states):
        distribution = phase.angular_q(state, config.grid_size, spec)
        _check_density(distribution, str(spec))
        for theta, value in zip(distribution.theta_grid, distribution.density):
            dataset.add_row(param, float(theta), float(value))


def _fluctuation(config, settings, states, result):
    for (param, spec), state in zip(config.states, states):
        report = phase.fluctuation_report(state)
        for name in report.undefined:
            result.notes.append(f"{spec}: {name} undefined (no phase reference)")
        result.dataset.add_row(
            param,
            report.mean_n,
            report.var_n,
            report.sin_mean,
            report.cos_mean,
            report.sin_var,
            report.cos_var,
            report.U,
            report.S,
            report.Q,
        )


def _dispersion(config, settings, states, result):
    for (param, spec), state in zip(config.states, states):
        distribution = phase.phase_distribution(state, config.grid_size, spec)
        result.dataset.add_row(
            param,
            phase.phase_dispersion(state),
            phase.phase_dispersion_from_distribution(distribution),
        )


def _estimate(config, settings, states, result):
    phi_grid = interferometry.default_phi_grid(config.phi_points, settings.phi_margin)
    for (param, spec), state in zip(config.states, states):
        sensitivity = interferometry.phase_uncertainty(state, phi_grid, spec=spec)
        for row in zip(
            sensitivity.phi_grid, sensitivity.var_jz, sensitivity.slope, sensitivity.delta_phi
        ):
            result.dataset.add_row(param, *(float(value) for value in row))


COLUMNS = {
    PhaseConfig.PHASE_DIST: ["param", "theta", "density"],
    PhaseConfig.ANGULAR_Q: ["param", "theta", "radius"],
    PhaseConfig.FLUCTUATION: [
        "param",
        "mean_n",
        "var_n",
        "sin_mean",
        "cos_mean",
        "sin_var",
        "cos_var",
        "U",
        "S",
        "Q",
    ],
    PhaseConfig.DISPERSION: ["param", "D", "D_quadrature"],
    PhaseConfig.ESTIMATE: ["param", "phi", "var_jz", "slope", "delta_phi"],
    PhaseConfig.VERIFY: ["check", "spec", "error", "tolerance", "passed"],
}

HANDLERS = {
    PhaseConfig.PHASE_DIST: _phase_dist,
    PhaseConfig.ANGULAR_Q: _angular_q,
    PhaseConfig.FLUCTUATION: _fluctuation,
    PhaseConfig.DISPERSION: _dispersion,
    PhaseConfig.ESTIMATE: _estimate,
}


def _verify(config: RunConfig, settings: PhaseConfig, path: Path) -> RunResult:
    report = verify.run_suite(config.suite, settings)
    dataset = Dataset(
        COLUMNS[PhaseConfig.VERIFY],
        header={
            "command": config.command,
            "suite": dataclasses.asdict(report.suite),
            "states": [spec.as_record() for spec in report.specs],
            "tolerances": settings.tolerances(),
        },
    )
    for check in report.results:
        dataset.add_row(check.check, check.spec, check.error, check.tolerance, check.passed)
    result = RunResult(dataset, path, failures=len(report.failures))
    write_dataset(dataset, path, config.output_format, settings.significant_digits)
    return result


def run(config: RunConfig, settings: PhaseConfig | None = None) -> RunResult:
    settings = settings or PhaseConfig()
    path = config.output or settings.output_path(config.command, config.output_format)
    if config.command == PhaseConfig.VERIFY:
        return _verify(config, settings, path)

    states = [
        build_state(
            spec,
            settings.truncation_tolerance,
            dim_cap=settings.dim_cap,
            zero_threshold=settings.zero_norm_threshold,
        )
        for _, spec in config.states
    ]
    dataset = Dataset(
        COLUMNS[config.command], header=_header(config, settings, [s.dim for s in states])
    )
    result = RunResult(dataset, path)
    HANDLERS[config.command](config, settings, states, result)
    if result.notes:
        dataset.header["notes"] = result.notes
    write_dataset(dataset, path, config.output_format, settings.significant_digits)
    return result
