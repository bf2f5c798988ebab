"""Brute-force dense-matrix path used to cross-check the series and amplitude routes.

Nothing here touches the binomial series or the log-factorial ladder
scalings: states are built as ``a_dagger**u @ D(alpha) @ e_n`` from matrices.
"""

import dataclasses
import math

import numpy as np
from scipy.linalg import expm

from fock_phase.errors import (
    DimensionMismatchError,
    InvalidSpecError,
    OracleConvergenceError,
    ZeroStateError,
)
from fock_phase.fock import ZERO_NORM_THRESHOLD, FockVector
from fock_phase.phase import FluctuationReport, fluctuation_from_moments
from fock_phase.states import OperationKind, StateSpec, default_dim, fix_global_phase

MAX_DIM = 256
MAX_TWO_MODE_DIM = 16
UNITARITY_TOLERANCE = 1e-8


@dataclasses.dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray
    label: str

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidSpecError(f"{self.label}: operator must be a square matrix")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.entries @ other.entries, f"{self.label}*{other.label}")

    def power(self, exponent: int) -> "OperatorMatrix":
        return OperatorMatrix(
            np.linalg.matrix_power(self.entries, exponent), f"{self.label}^{exponent}"
        )


def _check_dim(dim: int, minimum: int = 2, maximum: int = MAX_DIM):
    if not minimum <= dim <= maximum:
        raise InvalidSpecError(f"oracle dim must lie in [{minimum}, {maximum}], got {dim}")


def ladder_matrices(dim: int) -> tuple[OperatorMatrix, OperatorMatrix]:
    """(a, a_dagger) with a[k-1, k] = sqrt(k)."""
    _check_dim(dim)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
    return OperatorMatrix(a, "a"), OperatorMatrix(a.conj().T, "a_dagger")


def number_operator(dim: int) -> OperatorMatrix:
    a, a_dagger = ladder_matrices(dim)
    return OperatorMatrix((a_dagger @ a).entries, "N")


def displacement_matrix(alpha: complex, dim: int) -> OperatorMatrix:
    """D(alpha) = expm(alpha a_dagger - alpha* a) on the truncated space.

    Unitarity is certified on the first dim - ceil(4|alpha|) basis states.
    """
    _check_dim(dim)
    magnitude = abs(alpha)
    if dim < magnitude**2 + 8 * magnitude + 8:
        raise InvalidSpecError(
            f"dim={dim} is too small for |alpha|={magnitude:g}; need >= |alpha|^2 + 8|alpha| + 8"
        )
    a, a_dagger = ladder_matrices(dim)
    generator = alpha * a_dagger.entries - np.conj(alpha) * a.entries
    entries = expm(generator)

    low = dim - math.ceil(4 * magnitude)
    residual = entries.conj().T @ entries - np.eye(dim)
    error = float(np.max(np.abs(residual[:low, :low]))) if low > 0 else 0.0
    if not math.isfinite(error) or error >= UNITARITY_TOLERANCE:
        raise OracleConvergenceError(
            f"D({alpha}) on dim={dim} is not unitary on its low subspace: residual {error:.3e}"
        )
    return OperatorMatrix(entries, f"D({alpha})")


def oracle_dim(spec: StateSpec) -> int:
    """Twice the engineered starting cutoff, capped at MAX_DIM."""
    magnitude = spec.alpha_mag
    floor = math.ceil(magnitude**2 + 8 * magnitude + 8)
    return min(MAX_DIM, max(2 * default_dim(spec), floor))


def oracle_state(spec: StateSpec, dim: int | None = None) -> FockVector:
    spec.validate()
    dim = dim or oracle_dim(spec)
    if spec.fock_n >= dim:
        raise InvalidSpecError(f"dim={dim} must exceed n={spec.fock_n}")
    displaced = displacement_matrix(spec.alpha, dim).entries[:, spec.fock_n]

    a, a_dagger = ladder_matrices(dim)
    ladder = a_dagger if spec.kind == OperationKind.ADD else a
    vector = ladder.power(spec.count).entries @ displaced

    norm_sq = float(np.vdot(vector, vector).real)
    if norm_sq <= ZERO_NORM_THRESHOLD:
        raise ZeroStateError(f"{spec}: ladder action annihilates the state")
    return fix_global_phase(FockVector(vector / math.sqrt(norm_sq), 1 / math.sqrt(norm_sq)))


def oracle_expectation(state: FockVector, op: OperatorMatrix) -> complex:
    if op.dim < state.dim:
        raise DimensionMismatchError(
            f"{op.label} has dim {op.dim}, smaller than the state's {state.dim}"
        )
    psi = state.padded(op.dim).amplitudes
    return complex(np.vdot(psi, op.entries @ psi))


def phase_state_vector(theta: float, dim: int) -> np.ndarray:
    """Truncated unnormalized phase state sum_k exp(i k theta)|k>."""
    return np.exp(1j * theta * np.arange(dim))


def oracle_phase_density(state: FockVector, thetas) -> np.ndarray:
    """|<theta|psi>|^2 / 2pi by projection on explicit phase-state vectors."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    projections = [np.vdot(phase_state_vector(t, state.dim), state.amplitudes) for t in thetas]
    return np.abs(np.array(projections)) ** 2 / (2 * math.pi)


def oracle_fluctuation_report(state: FockVector) -> FluctuationReport:
    dim = max(2, state.dim)
    a, _ = ladder_matrices(dim)
    number = number_operator(dim)
    return fluctuation_from_moments(
        oracle_expectation(state, a),
        oracle_expectation(state, a.power(2)),
        oracle_expectation(state, number).real,
        oracle_expectation(state, number.power(2)).real,
    )


def interferometer_operators(dim: int) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Two-mode (J_x, J_z) on C^dim (x) C^dim."""
    _check_dim(dim, maximum=MAX_TWO_MODE_DIM)
    a, a_dagger = ladder_matrices(dim)
    eye = np.eye(dim)
    mode_a, mode_a_dag = np.kron(a.entries, eye), np.kron(a_dagger.entries, eye)
    mode_b, mode_b_dag = np.kron(eye, a.entries), np.kron(eye, a_dagger.entries)
    jx = 0.5 * (mode_a_dag @ mode_b + mode_b_dag @ mode_a)
    jz = 0.5 * (mode_a_dag @ mode_a - mode_b_dag @ mode_b)
    return OperatorMatrix(jx, "J_x"), OperatorMatrix(jz, "J_z")


def oracle_delta_jz(state: FockVector, phi: float, dim: int = MAX_TWO_MODE_DIM) -> float:
    """Variance of cos(phi) J_z - sin(phi) J_x on |psi> (x) |0>.

    The state is cut to its first ``dim`` levels; the discarded weight must be
    negligible.
    """
    discarded = float(np.sum(state.probabilities[dim:]))
    if discarded > 1e-14:
        raise DimensionMismatchError(
            f"state weight {discarded:.3e} lies above the two-mode cutoff dim={dim}"
        )
    jx, jz = interferometer_operators(dim)
    signal = np.zeros(dim, dtype=complex)
    keep = min(dim, state.dim)
    signal[:keep] = state.amplitudes[:keep]
    vacuum = np.zeros(dim)
    vacuum[0] = 1.0
    psi = np.kron(signal, vacuum)

    output = math.cos(phi) * jz.entries - math.sin(phi) * jx.entries
    mean = np.vdot(psi, output @ psi).real
    second = np.vdot(psi, output @ (output @ psi)).real
    return float(second - mean**2)
