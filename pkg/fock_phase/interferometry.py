"""Mach-Zehnder phase estimation with |psi> in one input port and vacuum in the other."""

import dataclasses
import enum
import math
from typing import NamedTuple

import numpy as np

from fock_phase import fock, series
from fock_phase.errors import InvalidSpecError, SlopeSingularError
from fock_phase.fock import FockVector
from fock_phase.states import StateSpec

SINGULAR_MARGIN = 1e-3


class Method(enum.StrEnum):
    DIRECT_MOMENTS = "direct_moments"
    APPENDIX_SERIES = "appendix_series"


class InputMoments(NamedTuple):
    jz_mean: float
    jz_var: float
    jx_mean: float
    jx_var: float
    cov_xz: float


def _product_moments(signal: FockVector, port: FockVector) -> InputMoments:
    """J_z / J_x moments of the product input |signal> (x) |port>."""
    a = fock.ladder_moment(signal, 0, 1)
    a2 = fock.ladder_moment(signal, 0, 2)
    a_dag_a_dag_a = fock.ladder_moment(signal, 2, 1)
    a_dag = np.conj(a)
    b = fock.ladder_moment(port, 0, 1)
    b2 = fock.ladder_moment(port, 0, 2)
    b_dag_b_b = fock.ladder_moment(port, 1, 2)
    na, var_a, _ = fock.number_moments(signal)
    nb, var_b, _ = fock.number_moments(port)

    jz_mean = 0.5 * (na - nb)
    jz_var = 0.25 * (var_a + var_b)
    jx_mean = (a_dag * b).real
    jx_second = 0.25 * (
        2 * (np.conj(a2) * b2).real + na * (nb + 1) + (na + 1) * nb
    )
    jx_var = jx_second - jx_mean**2
    symmetrized = 0.25 * (
        (2 * a_dag_a_dag_a + a_dag) * b - a_dag * (2 * b_dag_b_b + b)
    ).real
    cov_xz = symmetrized - jx_mean * jz_mean
    return InputMoments(float(jz_mean), float(jz_var), float(jx_mean), float(jx_var), float(cov_xz))


def input_moments(state: FockVector) -> InputMoments:
    """(<J_z>, Var J_z, <J_x>, Var J_x, cov(J_x, J_z)) for |psi> (x) |0>."""
    return _product_moments(state, FockVector.basis(0, 2))


def delta_jz_direct(state: FockVector, phi: float) -> float:
    m = input_moments(state)
    c, s = math.cos(phi), math.sin(phi)
    return c * c * m.jz_var + s * s * m.jx_var - 2 * s * c * m.cov_xz


def delta_jz_appendix(spec: StateSpec, phi: float, cutoff: int | None = None) -> float:
    return series.delta_jz_appendix(spec, phi, cutoff)


def slope_djz_dphi(state: FockVector, phi: float) -> float:
    """d<J_z>/dphi with <J_z>(phi) = cos(phi) <J_z>_in - sin(phi) <J_x>_in."""
    m = input_moments(state)
    return -math.sin(phi) * m.jz_mean - math.cos(phi) * m.jx_mean


def slope_appendix(spec: StateSpec, phi: float, cutoff: int | None = None) -> float:
    return series.slope_appendix(spec, phi, cutoff)


@dataclasses.dataclass(frozen=True)
class PhaseSensitivity:
    phi_grid: np.ndarray
    var_jz: np.ndarray
    slope: np.ndarray
    delta_phi: np.ndarray
    method: Method
    state_spec: StateSpec | None = None


def default_phi_grid(points: int = 256, margin: float = 0.05) -> np.ndarray:
    return np.linspace(margin, math.pi - margin, points)


def _check_grid(phi_grid: np.ndarray):
    offsets = np.abs(np.remainder(phi_grid + math.pi / 2, math.pi) - math.pi / 2)
    if np.any(offsets < SINGULAR_MARGIN):
        raise SlopeSingularError(
            f"phi grid comes within {SINGULAR_MARGIN} of a multiple of pi, where the slope vanishes"
        )


def phase_uncertainty(
    state: FockVector,
    phi_grid=None,
    method: Method | str = Method.DIRECT_MOMENTS,
    spec: StateSpec | None = None,
) -> PhaseSensitivity:
    """Delta phi = Delta J_z / |d<J_z>/dphi| over ``phi_grid``.

    The appendix method needs ``spec`` and evaluates both numerator and
    slope from the series.
    """
    method = Method(method)
    phi_grid = default_phi_grid() if phi_grid is None else np.asarray(phi_grid, dtype=float)
    _check_grid(phi_grid)

    if method == Method.DIRECT_MOMENTS:
        m = input_moments(state)
        cos, sin = np.cos(phi_grid), np.sin(phi_grid)
        var_jz = cos**2 * m.jz_var + sin**2 * m.jx_var - 2 * sin * cos * m.cov_xz
        slope = -sin * m.jz_mean - cos * m.jx_mean
    else:
        if spec is None:
            raise InvalidSpecError("The appendix series needs the StateSpec of the state")
        cutoff = state.dim
        var_jz = np.array([series.delta_jz_appendix(spec, phi, cutoff) for phi in phi_grid])
        slope = np.array([series.slope_appendix(spec, phi, cutoff) for phi in phi_grid])

    if not np.all(np.abs(slope) > 0):
        raise SlopeSingularError(
            "d<J_z>/dphi vanishes on the phi grid; the input carries no photons"
        )
    var_jz = np.maximum(var_jz, 0.0)
    delta_phi = np.sqrt(var_jz) / np.abs(slope)
    return PhaseSensitivity(phi_grid, var_jz, slope, delta_phi, method, spec)
