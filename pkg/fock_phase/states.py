"""Photon added / subtracted displaced Fock states and their limiting cases."""

import dataclasses
import enum
import math

import numpy as np

from fock_phase import fock
from fock_phase.errors import (
    InvalidSpecError,
    MissingParameterError,
    TruncationError,
    TruncationOverflowError,
)

MAX_COUNT = 16
MAX_FOCK = 32
MAX_ALPHA = 8.0


class OperationKind(enum.StrEnum):
    ADD = "add"
    SUBTRACT = "subtract"


class LimitingState(enum.StrEnum):
    DFS = "dfs"
    COHERENT = "coherent"
    FOCK = "fock"
    PACS = "pacs"
    PSCS = "pscs"


@dataclasses.dataclass(frozen=True)
class StateSpec:
    kind: OperationKind
    count: int
    fock_n: int
    alpha_mag: float
    alpha_phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", OperationKind(self.kind))

    @property
    def alpha(self) -> complex:
        return self.alpha_mag * complex(math.cos(self.alpha_phase), math.sin(self.alpha_phase))

    @property
    def added(self) -> int:
        return self.count if self.kind == OperationKind.ADD else 0

    @property
    def subtracted(self) -> int:
        return self.count if self.kind == OperationKind.SUBTRACT else 0

    def validate(self):
        if not 0 <= self.count <= MAX_COUNT:
            raise InvalidSpecError(f"count must lie in [0, {MAX_COUNT}], got {self.count}")
        if not 0 <= self.fock_n <= MAX_FOCK:
            raise InvalidSpecError(f"n must lie in [0, {MAX_FOCK}], got {self.fock_n}")
        if not 0.0 <= self.alpha_mag <= MAX_ALPHA:
            raise InvalidSpecError(f"|alpha| must lie in [0, {MAX_ALPHA}], got {self.alpha_mag}")
        if not math.isfinite(self.alpha_phase):
            raise InvalidSpecError(f"theta2 must be finite, got {self.alpha_phase}")
        return self

    def with_phase(self, alpha_phase: float) -> "StateSpec":
        return dataclasses.replace(self, alpha_phase=alpha_phase)

    def as_record(self) -> dict:
        return {
            "kind": self.kind.value,
            "count": self.count,
            "n": self.fock_n,
            "alpha_mag": self.alpha_mag,
            "alpha_phase": self.alpha_phase,
        }

    @classmethod
    def from_record(cls, record: dict):
        try:
            return cls(
                kind=OperationKind(record["kind"]),
                count=int(record["count"]),
                fock_n=int(record["n"]),
                alpha_mag=float(record["alpha_mag"]),
                alpha_phase=float(record.get("alpha_phase", 0.0)),
            ).validate()
        except KeyError as e:
            raise MissingParameterError(f"StateSpec record is missing {e}") from e
        except ValueError as e:
            if isinstance(e, InvalidSpecError):
                raise
            raise InvalidSpecError(f"Invalid StateSpec record: {e}") from e

    def __str__(self):
        sign = "+" if self.kind == OperationKind.ADD else "-"
        return (
            f"{sign}{self.count}|n={self.fock_n},"
            f"|a|={self.alpha_mag:g},t2={self.alpha_phase:g}"
        )


def default_dim(spec: StateSpec) -> int:
    """Starting cutoff from a Poisson tail bound on the displaced state."""
    intensity = spec.alpha_mag**2
    return (
        spec.fock_n
        + spec.count
        + math.ceil(intensity + 8 * math.sqrt(intensity + 1))
        + 16
    )


def _engineer(
    spec: StateSpec, dim: int, tolerance: float, zero_threshold: float = fock.ZERO_NORM_THRESHOLD
) -> fock.FockVector:
    raw = fock.displaced_fock_amplitudes(spec.fock_n, spec.alpha, dim)
    if spec.kind == OperationKind.ADD:
        raw = fock.apply_creation(raw, spec.count, tolerance)
    else:
        raw = fock.apply_annihilation(raw, spec.count, zero_threshold)
    state, _ = fock.normalize(raw, zero_threshold)
    return state


def fix_global_phase(state: fock.FockVector) -> fock.FockVector:
    """Rotate so that the first non-negligible amplitude is real and positive."""
    magnitudes = np.abs(state.amplitudes)
    first = int(np.argmax(magnitudes > 1e-14 * magnitudes.max()))
    rotation = np.conj(state.amplitudes[first]) / magnitudes[first]
    return fock.FockVector(state.amplitudes * rotation, state.normalization)


def build_state(
    spec: StateSpec,
    tolerance: float = fock.DEFAULT_TOLERANCE,
    dim: int | None = None,
    dim_cap: int = fock.DIM_CAP,
    zero_threshold: float = fock.ZERO_NORM_THRESHOLD,
) -> fock.FockVector:
    """Build the normalized PADFS/PSDFS of ``spec``.

    Without an explicit ``dim`` the cutoff starts at ``default_dim`` and doubles
    until the tail mass certifies it, up to ``dim_cap``. The returned vector's
    ``normalization`` is N+ or N-.
    """
    spec.validate()
    if not 0 < tolerance <= 1e-6:
        raise InvalidSpecError(f"tolerance must lie in (0, 1e-6], got {tolerance}")

    if dim is not None:
        state = _engineer(spec, dim, tolerance, zero_threshold)
        if state.tail_mass >= tolerance:
            raise TruncationError(
                f"{spec}: tail mass {state.tail_mass:.3e} at dim={dim} exceeds {tolerance:.1e}"
            )
        return fix_global_phase(state)

    dim = default_dim(spec)
    while dim <= dim_cap:
        try:
            state = _engineer(spec, dim, tolerance, zero_threshold)
        except TruncationOverflowError:
            dim *= 2
            continue
        if state.tail_mass < tolerance:
            return fix_global_phase(state)
        dim *= 2
    raise TruncationError(f"{spec}: no certified cutoff below dim_cap={dim_cap}")


def certified_dim(spec: StateSpec, tolerance: float = fock.DEFAULT_TOLERANCE) -> int:
    return build_state(spec, tolerance).dim


def limiting_state(name: LimitingState | str, **params) -> StateSpec:
    """StateSpec realizing a named limiting case.

    ``params`` may supply ``n``, ``alpha`` (complex) and ``count``.
    """
    try:
        name = LimitingState(name)
    except ValueError:
        raise InvalidSpecError(f"Unknown limiting state '{name}'")

    needed = {
        LimitingState.DFS: ("n", "alpha"),
        LimitingState.COHERENT: ("alpha",),
        LimitingState.FOCK: ("n",),
        LimitingState.PACS: ("count", "alpha"),
        LimitingState.PSCS: ("count", "alpha"),
    }[name]
    missing = [key for key in needed if params.get(key) is None]
    if missing:
        raise MissingParameterError(f"{name.value} needs: {', '.join(missing)}")

    alpha = complex(params.get("alpha") or 0.0)
    magnitude = abs(alpha)
    phase = math.atan2(alpha.imag, alpha.real) if magnitude else 0.0
    kind = OperationKind.SUBTRACT if name == LimitingState.PSCS else OperationKind.ADD
    count = int(params["count"]) if name in (LimitingState.PACS, LimitingState.PSCS) else 0
    fock_n = int(params["n"]) if name in (LimitingState.DFS, LimitingState.FOCK) else 0
    if name == LimitingState.FOCK:
        magnitude, phase = 0.0, 0.0
    return StateSpec(kind, count, fock_n, magnitude, phase).validate()
