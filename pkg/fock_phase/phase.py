"""Phase distributions, Barnett-Pegg phase fluctuations and phase dispersion."""

import dataclasses
import math

import numpy as np
from scipy.special import gammaln, roots_legendre

from fock_phase import fock, series
from fock_phase.errors import (
    InvalidGridError,
    NoPhaseReferenceError,
    OutOfRangeError,
    QuadratureError,
)
from fock_phase.fock import FockVector
from fock_phase.states import StateSpec

MIN_GRID = 64
PHASE_REFERENCE_THRESHOLD = 1e-24
COSINE_THRESHOLD = 1e-12


@dataclasses.dataclass(frozen=True)
class PhaseDistribution:
    theta_grid: np.ndarray
    density: np.ndarray
    state_spec: StateSpec | None = None
    source: str = "phase"

    @property
    def step(self) -> float:
        return 2 * math.pi / self.theta_grid.size

    def integral(self) -> float:
        """Trapezoidal integral over the periodic grid."""
        return float(self.step * np.sum(self.density))

    def peak_theta(self) -> float:
        return float(self.theta_grid[int(np.argmax(self.density))])

    def index_of(self, theta: float) -> int:
        offsets = np.angle(np.exp(1j * (self.theta_grid - theta)))
        return int(np.argmin(np.abs(offsets)))


def theta_grid(grid_size: int, dim: int = 0) -> np.ndarray:
    """Uniform grid over [-pi, pi), upsized to at least 2*dim points."""
    if grid_size < MIN_GRID:
        raise InvalidGridError(f"grid_size must be >= {MIN_GRID}, got {grid_size}")
    size = max(grid_size, 2 * dim)
    return -math.pi + 2 * math.pi * np.arange(size) / size


def phase_density(state: FockVector, thetas) -> np.ndarray:
    """P_theta = |sum_k c_k exp(-i k theta)|^2 / 2pi at arbitrary theta values."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    k = np.arange(state.dim)
    sums = np.exp(-1j * np.outer(thetas, k)) @ state.amplitudes
    return np.abs(sums) ** 2 / (2 * math.pi)


def phase_distribution(
    state: FockVector, grid_size: int = 1024, spec: StateSpec | None = None
) -> PhaseDistribution:
    grid = theta_grid(grid_size, state.dim)
    return PhaseDistribution(grid, phase_density(state, grid), spec, "phase")


def closed_form_p_theta(spec: StateSpec, theta: float, cutoff: int | None = None) -> float:
    return series.closed_form_p_theta(spec, theta, cutoff)


def husimi_q(state: FockVector, beta: complex) -> float:
    """Q(beta) = |<beta|psi>|^2 / pi."""
    radius = abs(beta)
    if radius**2 + 8 * radius > state.dim:
        raise OutOfRangeError(
            f"|beta|={radius:g} is outside the range certified by dim={state.dim}"
        )
    return float(_radial_q(state, np.array([radius]), float(np.angle(beta)))[0])


def _radial_q(state: FockVector, radii: np.ndarray, theta1: float) -> np.ndarray:
    k = np.arange(state.dim)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_r = np.log(radii)[:, None]
        log_terms = np.where(k[None, :] == 0, 0.0, k[None, :] * log_r)
    log_terms = log_terms - 0.5 * fock.log_factorial(k)[None, :] - 0.5 * radii[:, None] ** 2
    overlaps = (np.exp(log_terms) * np.exp(-1j * k * theta1)[None, :]) @ state.amplitudes
    return np.abs(overlaps) ** 2 / math.pi


def _angular_kernel(dim: int) -> np.ndarray:
    k = np.arange(dim)
    log_fact = fock.log_factorial(k)
    return np.exp(
        gammaln((k[:, None] + k[None, :]) / 2 + 1) - 0.5 * (log_fact[:, None] + log_fact[None, :])
    )


def angular_q(
    state: FockVector, grid_size: int = 1024, spec: StateSpec | None = None
) -> PhaseDistribution:
    """Radius-integrated Q function in closed form.

    Q_theta1 = 1/2pi sum_{k,l} c_k c_l* exp(i(l-k)theta1) Gamma((k+l)/2+1) / sqrt(k! l!)
    """
    grid = theta_grid(grid_size, state.dim)
    k = np.arange(state.dim)
    weighted = state.amplitudes[None, :] * np.exp(-1j * np.outer(grid, k))
    kernel = _angular_kernel(state.dim)
    values = np.einsum("gk,kl,gl->g", weighted, kernel, np.conj(weighted)).real
    return PhaseDistribution(grid, values / (2 * math.pi), spec, "angular_q")


def angular_q_quadrature(
    state: FockVector,
    theta1: float,
    radial_points: int = 32,
    tail_bound: float = 1e-12,
    max_refinements: int = 4,
) -> float:
    """Q_theta1 by Gauss-Legendre panels over |beta| in [0, R].

    R = sqrt(<N>) + sqrt(dim) + 6 bounds the support of every basis term. The
    panel rule is refined by doubling the node count until two successive
    estimates agree.
    """
    mean, _, _ = fock.number_moments(state)
    radius = math.sqrt(mean) + math.sqrt(state.dim) + 6
    tail = float(_radial_q(state, np.array([radius]), theta1)[0]) * radius
    if tail >= tail_bound:
        raise QuadratureError(f"Radial integrand at R={radius:.2f} is {tail:.3e}")

    panels = math.ceil(radius)
    edges = np.linspace(0.0, radius, panels + 1)

    def integrate(points):
        nodes, weights = roots_legendre(points)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        radii = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        w = (half[:, None] * weights[None, :]).ravel()
        return float(np.sum(w * _radial_q(state, radii, theta1) * radii))

    points = radial_points
    estimate = integrate(points)
    for _ in range(max_refinements):
        points *= 2
        refined = integrate(points)
        if abs(refined - estimate) <= 1e-12:
            return refined
        estimate = refined
    raise QuadratureError(f"Radial quadrature did not converge at {points} nodes per panel")


@dataclasses.dataclass(frozen=True)
class FluctuationReport:
    """Barnett-Pegg sine/cosine moments and the Carruthers-Nieto U, S, Q.

    ``U`` is None when <S>^2 + <C>^2 vanishes and ``Q`` is None when <C>
    vanishes: such states carry no phase reference.
    """

    mean_n: float
    var_n: float
    sin_mean: float
    cos_mean: float
    sin_var: float
    cos_var: float
    U: float | None
    S: float
    Q: float | None

    @property
    def undefined(self) -> tuple[str, ...]:
        return tuple(name for name in ("U", "Q") if getattr(self, name) is None)

    def require(self, name: str) -> float:
        value = getattr(self, name)
        if value is None:
            raise NoPhaseReferenceError(f"{name} is undefined: the state has no phase reference")
        return value


def fluctuation_from_moments(
    a_mean: complex, a2_mean: complex, n_mean: float, n2_mean: float
) -> FluctuationReport:
    scale = n_mean + 0.5
    sin_mean = a_mean.imag / math.sqrt(scale)
    cos_mean = a_mean.real / math.sqrt(scale)
    sin_sq = (2 * n_mean + 1 - 2 * a2_mean.real) / (4 * scale)
    cos_sq = (2 * n_mean + 1 + 2 * a2_mean.real) / (4 * scale)
    sin_var = sin_sq - sin_mean**2
    cos_var = cos_sq - cos_mean**2
    var_n = n2_mean - n_mean**2

    reference = sin_mean**2 + cos_mean**2
    u = var_n * (sin_var + cos_var) / reference if reference > PHASE_REFERENCE_THRESHOLD else None
    s = var_n * sin_var
    q = s / cos_mean**2 if abs(cos_mean) > COSINE_THRESHOLD else None
    return FluctuationReport(n_mean, var_n, sin_mean, cos_mean, sin_var, cos_var, u, s, q)


def fluctuation_report(state: FockVector) -> FluctuationReport:
    mean, _, second = fock.number_moments(state)
    return fluctuation_from_moments(
        fock.ladder_moment(state, 0, 1),
        fock.ladder_moment(state, 0, 2),
        mean,
        second,
    )


def phase_dispersion(state: FockVector) -> float:
    """D = 1 - |sum_k c_k* c_(k+1)|^2."""
    first_harmonic = np.vdot(state.amplitudes[1:], state.amplitudes[:-1])
    return float(min(1.0, max(0.0, 1.0 - abs(first_harmonic) ** 2)))


def phase_dispersion_from_distribution(distribution: PhaseDistribution) -> float:
    """D = 1 - |integral exp(-i theta) P_theta dtheta|^2 by the trapezoid rule."""
    harmonic = distribution.step * np.sum(
        np.exp(-1j * distribution.theta_grid) * distribution.density
    )
    return float(1.0 - abs(harmonic) ** 2)


def full_width_half_maximum(distribution: PhaseDistribution) -> float:
    """Total measure of {theta : P_theta >= max / 2} on the periodic grid.

    Each grid cell contributes the fraction of it where the linear interpolant
    stays above half maximum, so split lobes are added together. A flat
    density gives 2*pi.
    """
    density = distribution.density
    following = np.roll(density, -1)
    half = 0.5 * float(density.max())
    low, high = np.minimum(density, following), np.maximum(density, following)
    span = np.where(high > low, high - low, 1.0)
    fraction = np.where(low >= half, 1.0, np.clip((high - half) / span, 0.0, 1.0))
    return float(distribution.step * np.sum(fraction))


def has_peak_at(distribution: PhaseDistribution, center: float) -> bool:
    """True when the grid point nearest ``center`` is a strict local maximum."""
    i = distribution.index_of(center)
    density = distribution.density
    size = density.size
    return bool(density[i] > density[(i - 1) % size] and density[i] > density[(i + 1) % size])
