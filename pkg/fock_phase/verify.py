"""Randomized cross-check of every closed-form quantity against the oracle path."""

import dataclasses

import numpy as np

from fock_phase import interferometry, oracle, phase, series
from fock_phase.config import PhaseConfig, Suite
from fock_phase.fock import FockVector, ladder_moment, number_moments
from fock_phase.states import OperationKind, StateSpec, build_state

TOLERANCE = 1e-8


@dataclasses.dataclass(frozen=True)
class CheckResult:
    check: str
    spec: str
    error: float
    tolerance: float = TOLERANCE

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.error) and self.error <= self.tolerance)

    def table_row(self):
        return [self.check, self.spec, f"{self.error:.3e}", "ok" if self.passed else "FAIL"]


@dataclasses.dataclass
class SuiteReport:
    suite: Suite
    specs: list[StateSpec]
    results: list[CheckResult]

    @property
    def failures(self) -> list[CheckResult]:
        return [result for result in self.results if not result.passed]

    @property
    def passed(self) -> bool:
        return not self.failures


def _relative(value, reference) -> float:
    return float(np.max(np.abs(np.asarray(value) - np.asarray(reference))) / max(1.0, np.max(np.abs(reference))))


def suite_specs(suite: Suite) -> list[StateSpec]:
    """Deterministic random specs: kind, count, n and |alpha| drawn from the suite seed."""
    rng = np.random.default_rng(suite.seed)
    specs = []
    for i in range(suite.specs):
        kind = OperationKind.ADD if rng.integers(0, 2) == 0 else OperationKind.SUBTRACT
        count = int(rng.integers(0, suite.max_count + 1))
        fock_n = int(rng.integers(0, suite.max_fock + 1))
        magnitude = round(float(rng.uniform(suite.min_alpha, suite.max_alpha)), 6)
        phase_value = suite.phases[i % len(suite.phases)]
        specs.append(StateSpec(kind, count, fock_n, magnitude, phase_value).validate())
    return specs


def _oracle_moments(state: FockVector) -> dict:
    dim = max(2, state.dim)
    a, a_dagger = oracle.ladder_matrices(dim)
    number = oracle.number_operator(dim)
    return {
        "a": oracle.oracle_expectation(state, a),
        "a2": oracle.oracle_expectation(state, a.power(2)),
        "a_dag_a2": oracle.oracle_expectation(state, a_dagger @ a.power(2)),
        "n": oracle.oracle_expectation(state, number).real,
        "n2": oracle.oracle_expectation(state, number.power(2)).real,
    }


def check_spec(spec: StateSpec, suite: Suite, settings: PhaseConfig) -> list[CheckResult]:
    label = str(spec)
    results = []

    def record(check, value, reference, tolerance=TOLERANCE):
        results.append(CheckResult(check, label, _relative(value, reference), tolerance))

    state = build_state(
        spec,
        settings.truncation_tolerance,
        dim_cap=settings.dim_cap,
        zero_threshold=settings.zero_norm_threshold,
    )
    reference = oracle.oracle_state(spec)
    cutoff = state.dim

    results.append(CheckResult("fidelity", label, 1.0 - state.fidelity(reference)))
    record("normalization", state.normalization, series.normalization_constant(spec, cutoff))

    mean, _, second = number_moments(state)
    series_mean, series_second = series.series_number_moments(spec, cutoff)
    moments = _oracle_moments(reference)
    record("mean_n/series", mean, series_mean)
    record("second_n/series", second, series_second)
    record("mean_n/oracle", mean, moments["n"])
    record("second_n/oracle", second, moments["n2"])
    record("<a>/oracle", ladder_moment(state, 0, 1), moments["a"])
    record("<a^2>/oracle", ladder_moment(state, 0, 2), moments["a2"])
    record("<a+ a^2>/oracle", ladder_moment(state, 1, 2), moments["a_dag_a2"])

    thetas = np.array(suite.thetas) + spec.alpha_phase
    density = phase.phase_density(state, thetas)
    record("p_theta/oracle", density, oracle.oracle_phase_density(reference, thetas))
    closed = [series.closed_form_p_theta(spec, theta, cutoff) for theta in thetas]
    record("p_theta/closed_form", density, closed)

    report = phase.fluctuation_report(state)
    oracle_report = oracle.oracle_fluctuation_report(reference)
    record("S/oracle", report.S, oracle_report.S)
    for name in ("U", "Q"):
        value, expected = getattr(report, name), getattr(oracle_report, name)
        if value is not None and expected is not None:
            record(f"{name}/oracle", value, expected)

    distribution = phase.phase_distribution(reference, settings.grid_size)
    record(
        "D/quadrature",
        phase.phase_dispersion(state),
        phase.phase_dispersion_from_distribution(distribution),
    )

    angular = phase.angular_q(state, settings.grid_size)
    peak = angular.index_of(spec.alpha_phase)
    record(
        "angular_q/quadrature",
        phase.angular_q_quadrature(state, angular.theta_grid[peak], settings.radial_points),
        angular.density[peak],
    )

    phis = np.array(suite.phis)
    two_mode = float(np.sum(state.probabilities[oracle.MAX_TWO_MODE_DIM :])) <= 1e-14
    for phi in phis:
        direct = interferometry.delta_jz_direct(state, phi)
        record("delta_jz/appendix", direct, series.delta_jz_appendix(spec, phi, cutoff))
        slope = interferometry.slope_djz_dphi(state, phi)
        record("slope/appendix", abs(slope), abs(series.slope_appendix(spec, phi, cutoff)))
        if two_mode:
            record("delta_jz/oracle", direct, oracle.oracle_delta_jz(state, phi))
    direct = interferometry.phase_uncertainty(state, phis)
    appendix = interferometry.phase_uncertainty(
        state, phis, interferometry.Method.APPENDIX_SERIES, spec
    )
    record("delta_phi/appendix", direct.delta_phi, appendix.delta_phi)

    resolved = series.resolve_appendix_grouping(spec, cutoff)
    results.append(
        CheckResult(
            f"grouping/{series.RESOLVED_GROUPING}",
            label,
            0.0 if series.RESOLVED_GROUPING in resolved else np.inf,
        )
    )

    results.extend(_cutoff_checks(spec, state, report, suite, settings))
    return results


def _cutoff_checks(spec, state, report, suite, settings) -> list[CheckResult]:
    """Doubling the cutoff must leave every reported quantity unchanged."""
    label = str(spec)
    doubled = build_state(spec, settings.truncation_tolerance, dim=2 * state.dim)
    doubled_report = phase.fluctuation_report(doubled)
    thetas = np.array(suite.thetas) + spec.alpha_phase
    phis = np.array(suite.phis)
    grid_size = max(settings.grid_size, 2 * doubled.dim)
    pairs = {
        "cutoff/mean_n": (report.mean_n, doubled_report.mean_n),
        "cutoff/var_n": (report.var_n, doubled_report.var_n),
        "cutoff/S": (report.S, doubled_report.S),
        "cutoff/D": (phase.phase_dispersion(state), phase.phase_dispersion(doubled)),
        "cutoff/p_theta": (
            phase.phase_density(state, thetas),
            phase.phase_density(doubled, thetas),
        ),
        "cutoff/angular_q": (
            phase.angular_q(state, grid_size).density,
            phase.angular_q(doubled, grid_size).density,
        ),
        "cutoff/delta_jz": (
            [interferometry.delta_jz_direct(state, phi) for phi in phis],
            [interferometry.delta_jz_direct(doubled, phi) for phi in phis],
        ),
        "cutoff/delta_phi": (
            interferometry.phase_uncertainty(state, phis).delta_phi,
            interferometry.phase_uncertainty(doubled, phis).delta_phi,
        ),
    }
    for name in ("U", "Q"):
        value, expected = getattr(report, name), getattr(doubled_report, name)
        if value is not None and expected is not None:
            pairs[f"cutoff/{name}"] = (value, expected)
    return [
        CheckResult(check, label, _relative(value, reference))
        for check, (value, reference) in pairs.items()
    ]


def run_suite(name: str, settings: PhaseConfig | None = None) -> SuiteReport:
    settings = settings or PhaseConfig()
    suite = settings.get_suite(name)
    specs = suite_specs(suite)
    results = []
    for spec in specs:
        results.extend(check_spec(spec, suite, settings))
    return SuiteReport(suite, specs, results)
