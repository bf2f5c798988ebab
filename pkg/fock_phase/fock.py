"""Truncated Fock-space amplitudes, ladder-operator actions and operator moments.

Amplitudes are numpy complex vectors indexed by photon number. Every factorial
ratio is evaluated as ``exp`` of log-factorial differences so that photon
numbers well beyond 170 stay finite.
"""

import dataclasses
import math

import numpy as np
from scipy.special import gammaln

from fock_phase.errors import (
    InvalidSpecError,
    TruncationOverflowError,
    ZeroStateError,
)

DEFAULT_TOLERANCE = 1e-12
DIM_CAP = 4096
ZERO_NORM_THRESHOLD = 1e-300
TAIL_FRACTION = 0.1


def log_factorial(k):
    """ln(k!) for a nonnegative integer or an integer array."""
    if np.any(np.asarray(k) < 0):
        raise InvalidSpecError(f"log_factorial needs k >= 0, got {k}")
    value = gammaln(np.asarray(k, dtype=float) + 1.0)
    if np.ndim(value) == 0:
        return float(value)
    return value


def log_binomial(n, k):
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k)


def log_power(base: float, exponent):
    """exponent * ln(base) with the 0**0 == 1 convention."""
    exponent = np.asarray(exponent, dtype=float)
    if base == 0.0:
        return np.where(exponent == 0, 0.0, -np.inf)
    return exponent * math.log(base)


@dataclasses.dataclass(frozen=True)
class RawFockVector:
    """Unnormalized amplitudes over |0>...|dim-1>."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if amplitudes.ndim != 1 or amplitudes.size == 0:
            raise InvalidSpecError("amplitudes must be a non-empty 1-d array")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclasses.dataclass(frozen=True)
class FockVector:
    """Unit-norm amplitudes over |0>...|dim-1>.

    ``normalization`` is the constant that was applied to the raw vector
    (N+ or N- for engineered states, 1.0 otherwise).
    """

    amplitudes: np.ndarray
    normalization: float = 1.0

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if amplitudes.ndim != 1 or amplitudes.size == 0:
            raise InvalidSpecError("amplitudes must be a non-empty 1-d array")
        norm_sq = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm_sq - 1.0) > 1e-10:
            raise InvalidSpecError(f"FockVector is not normalized: norm^2 = {norm_sq}")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def basis(cls, n: int, dim: int):
        if not 0 <= n < dim:
            raise InvalidSpecError(f"basis state |{n}> needs dim > {n}")
        amplitudes = np.zeros(dim, dtype=complex)
        amplitudes[n] = 1.0
        return cls(amplitudes)

    @classmethod
    def coherent(cls, alpha: complex, dim: int):
        state, _ = normalize(displaced_fock_amplitudes(0, alpha, dim))
        return state

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def tail_mass(self) -> float:
        """Probability carried by the top 10% of basis indices."""
        tail = max(1, math.ceil(TAIL_FRACTION * self.dim))
        return float(np.sum(self.probabilities[-tail:]))

    def padded(self, dim: int):
        if dim < self.dim:
            raise InvalidSpecError(f"cannot pad dim {self.dim} down to {dim}")
        amplitudes = np.zeros(dim, dtype=complex)
        amplitudes[: self.dim] = self.amplitudes
        return FockVector(amplitudes, self.normalization)

    def overlap(self, other: "FockVector") -> complex:
        """<self|other>, padding the shorter vector with zeros."""
        dim = max(self.dim, other.dim)
        return complex(np.vdot(self.padded(dim).amplitudes, other.padded(dim).amplitudes))

    def fidelity(self, other: "FockVector") -> float:
        return abs(self.overlap(other)) ** 2


def displaced_fock_amplitudes(n: int, alpha: complex, dim: int) -> RawFockVector:
    """Amplitudes of D(alpha)|n> truncated to ``dim`` basis states.

    Accumulates the binomial double sum over p (and m = k - p). Every term
    landing on |k> carries the same phase exp(i*theta2*(k - n)), so the sums
    are done on real magnitudes and the phase is attached exactly.
    """
    if n < 0:
        raise InvalidSpecError(f"Fock parameter must be >= 0, got {n}")
    if dim <= n:
        raise InvalidSpecError(f"Truncation dim={dim} must exceed n={n}")

    magnitude = abs(alpha)
    phase = float(np.angle(alpha)) if magnitude else 0.0

    p = np.arange(n + 1)[:, None]
    k = np.arange(dim)[None, :]
    m = k - p
    valid = m >= 0
    m = np.where(valid, m, 0)

    with np.errstate(invalid="ignore"):
        log_terms = (
            log_binomial(n, p)
            + log_power(magnitude, (n - p) + m)
            - 0.5 * magnitude**2
            + 0.5 * log_factorial(k)
            - log_factorial(m)
            - 0.5 * log_factorial(n)
        )
    signs = np.where((n - p) % 2 == 0, 1.0, -1.0)
    terms = np.where(valid, signs * np.exp(log_terms), 0.0)
    real_sums = terms.sum(axis=0)

    phases = np.exp(1j * phase * (np.arange(dim) - n))
    return RawFockVector(real_sums * phases)


def _check_headroom(state: RawFockVector, shift: int, tolerance: float):
    if shift == 0:
        return
    if shift >= state.dim:
        raise TruncationOverflowError(f"dim={state.dim} leaves no room for {shift} photons")
    norm_sq = state.norm_sq
    top = float(np.sum(np.abs(state.amplitudes[-shift:]) ** 2))
    if norm_sq and top / norm_sq >= tolerance:
        raise TruncationOverflowError(
            f"Top {shift} amplitudes carry relative weight {top / norm_sq:.3e} >= {tolerance:.1e}"
        )


def apply_creation(
    state: RawFockVector, u: int, tolerance: float = DEFAULT_TOLERANCE
) -> RawFockVector:
    """a^dagger**u: amplitude k moves to k + u, scaled by sqrt((k+u)!/k!)."""
    if u < 0:
        raise InvalidSpecError(f"u must be >= 0, got {u}")
    if u == 0:
        return state
    _check_headroom(state, u, tolerance)
    dim = state.dim
    k = np.arange(dim - u)
    scale = np.exp(0.5 * (log_factorial(k + u) - log_factorial(k)))
    amplitudes = np.zeros(dim, dtype=complex)
    amplitudes[u:] = state.amplitudes[: dim - u] * scale
    return RawFockVector(amplitudes)


def apply_annihilation(
    state: RawFockVector, v: int, zero_threshold: float = ZERO_NORM_THRESHOLD
) -> RawFockVector:
    """a**v: amplitude k moves to k - v, scaled by sqrt(k!/(k-v)!); k < v is dropped."""
    if v < 0:
        raise InvalidSpecError(f"v must be >= 0, got {v}")
    if v == 0:
        return state
    dim = state.dim
    amplitudes = np.zeros(dim, dtype=complex)
    if v < dim:
        k = np.arange(v, dim)
        scale = np.exp(0.5 * (log_factorial(k) - log_factorial(k - v)))
        amplitudes[: dim - v] = state.amplitudes[v:] * scale
    result = RawFockVector(amplitudes)
    if result.norm_sq <= zero_threshold:
        raise ZeroStateError(f"Subtracting {v} photons annihilates the state")
    return result


def normalize(
    state: RawFockVector, zero_threshold: float = ZERO_NORM_THRESHOLD
) -> tuple[FockVector, float]:
    norm_sq = state.norm_sq
    if norm_sq <= zero_threshold:
        raise ZeroStateError(f"Cannot normalize a zero-norm state (norm^2 = {norm_sq})")
    constant = 1.0 / math.sqrt(norm_sq)
    return FockVector(state.amplitudes * constant, normalization=constant), constant


def ladder_moment(state: FockVector, j: int, k: int) -> complex:
    """<psi| a^dagger**j a**k |psi> = <a**j psi | a**k psi>."""
    if j < 0 or k < 0:
        raise InvalidSpecError(f"ladder powers must be >= 0, got ({j}, {k})")
    top = max(j, k)
    if top >= state.dim:
        return 0j
    q = np.arange(state.dim - top)
    left = state.amplitudes[q + j] * np.exp(
        0.5 * (log_factorial(q + j) - log_factorial(q))
    )
    right = state.amplitudes[q + k] * np.exp(
        0.5 * (log_factorial(q + k) - log_factorial(q))
    )
    return complex(np.vdot(left, right))


def number_moments(state: FockVector) -> tuple[float, float, float]:
    """(mean, variance, second moment) of the photon number."""
    k = np.arange(state.dim)
    probabilities = state.probabilities
    mean = float(np.dot(k, probabilities))
    second = float(np.dot(k**2, probabilities))
    return mean, second - mean**2, second
