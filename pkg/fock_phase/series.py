"""Closed-form double sums for PADFS/PSDFS.

These evaluate the binomial series over (p, m) directly, independent of the
amplitude vectors built in ``fock``/``states``. Index conventions: ``k = m + p``
is the photon number of the displaced Fock state before the ladder operation
and ``j = k + u`` (addition) or ``j = k - v`` (subtraction) after it.

All phases of alpha cancel in N and in the number moments; in P_theta they
enter only through theta - theta2.
"""

import math

import numpy as np

from fock_phase import fock
from fock_phase.errors import ZeroStateError
from fock_phase.states import OperationKind, StateSpec, certified_dim


def _cutoff(spec: StateSpec, cutoff: int | None) -> int:
    return cutoff if cutoff is not None else certified_dim(spec)


def displacement_terms(spec: StateSpec, cutoff: int) -> np.ndarray:
    """Real terms T[p, k] of D(alpha)|n> with the theta2 phase stripped.

    T[p, k] = C(n,p) (-1)^(n-p) |alpha|^(n-p+m) e^(-|alpha|^2/2) sqrt(k!) / (m! sqrt(n!)).
    """
    n, magnitude = spec.fock_n, spec.alpha_mag
    p = np.arange(n + 1)[:, None]
    k = np.arange(cutoff)[None, :]
    m = k - p
    valid = m >= 0
    m = np.where(valid, m, 0)
    with np.errstate(invalid="ignore"):
        log_terms = (
            fock.log_binomial(n, p)
            + fock.log_power(magnitude, n - p + m)
            - 0.5 * magnitude**2
            + 0.5 * fock.log_factorial(k)
            - fock.log_factorial(m)
            - 0.5 * fock.log_factorial(n)
        )
    signs = np.where((n - p) % 2 == 0, 1.0, -1.0)
    return np.where(valid, signs * np.exp(log_terms), 0.0)


def operation_weights(spec: StateSpec, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """(log g(k), j(k)) where g is the squared ladder factor and j the final photon number.

    Entries with k < v carry log g = -inf.
    """
    k = np.arange(cutoff)
    if spec.kind == OperationKind.ADD:
        u = spec.count
        return fock.log_factorial(k + u) - fock.log_factorial(k), k + u
    v = spec.count
    valid = k >= v
    safe = np.where(valid, k - v, 0)
    log_g = np.where(valid, fock.log_factorial(k) - fock.log_factorial(safe), -np.inf)
    return log_g, k - v


def _weighted_sum(spec: StateSpec, cutoff: int, weight) -> float:
    """Sum over p, p', k of T[p,k] T[p',k] g(k) w(j)."""
    terms = displacement_terms(spec, cutoff)
    log_g, j = operation_weights(spec, cutoff)
    g = np.exp(log_g)
    return float(np.einsum("pk,qk,k->", terms, terms, g * weight(j)))


def normalization_constant(spec: StateSpec, cutoff: int | None = None) -> float:
    """N+ or N- from the double series."""
    cutoff = _cutoff(spec, cutoff)
    total = _weighted_sum(spec, cutoff, np.ones_like)
    if total <= fock.ZERO_NORM_THRESHOLD:
        raise ZeroStateError(f"{spec}: series norm vanishes")
    return 1.0 / math.sqrt(total)


def series_number_moments(spec: StateSpec, cutoff: int | None = None) -> tuple[float, float]:
    """(<N>, <N^2>) of the engineered state from the series."""
    cutoff = _cutoff(spec, cutoff)
    norm_sq = normalization_constant(spec, cutoff) ** 2
    mean = norm_sq * _weighted_sum(spec, cutoff, lambda j: j.astype(float))
    second = norm_sq * _weighted_sum(spec, cutoff, lambda j: j.astype(float) ** 2)
    return mean, second


def closed_form_p_theta(spec: StateSpec, theta: float, cutoff: int | None = None) -> float:
    """P_theta of the PADFS/PSDFS from the explicit sum over p, p', m, m'."""
    cutoff = _cutoff(spec, cutoff)
    norm_sq = normalization_constant(spec, cutoff) ** 2
    log_g, _ = operation_weights(spec, cutoff)
    amplitude_terms = displacement_terms(spec, cutoff) * np.exp(0.5 * log_g)[None, :]
    k = np.arange(cutoff)
    delta = theta - spec.alpha_phase
    phases = np.cos(delta * (k[None, :] - k[:, None]))
    total = np.einsum("pk,ql,kl->", amplitude_terms, amplitude_terms, phases)
    return float(norm_sq * total / (2 * math.pi))


APPENDIX_GROUPINGS = (
    "printed-second-moment",
    "printed-mean-squared",
    "number-outside-second-moment",
    "number-outside-mean-squared",
)
RESOLVED_GROUPING = "number-outside-mean-squared"


def _appendix_brace_terms(spec: StateSpec, cutoff: int) -> dict:
    """The separately normalized sums that appear inside the cos^2 brace."""
    norm_sq = normalization_constant(spec, cutoff) ** 2
    pair = norm_sq * _weighted_sum(
        spec, cutoff, lambda j: 0.5 * j.astype(float) * (j.astype(float) - 1)
    )
    mean, second = series_number_moments(spec, cutoff)
    return {"pair": pair, "mean": mean, "second": second}


def appendix_bracket_candidates(spec: StateSpec, cutoff: int | None = None) -> dict:
    """cos^2(phi) coefficient of (Delta J_z)^2 under each readable bracket grouping.

    ``pair`` is <N(N-1)/2>. The printed bracket reads
    1/2 [ <N(N-1)/2> + <N> - 1/2 X ] with X either the second-moment sum as
    printed or the squared mean; the ``number-outside`` variants move <N> out
    of the bracket with the same overall 1/2.
    """
    cutoff = _cutoff(spec, cutoff)
    t = _appendix_brace_terms(spec, cutoff)
    pair, mean, second = t["pair"], t["mean"], t["second"]
    return {
        "printed-second-moment": 0.5 * (pair + mean - 0.5 * second),
        "printed-mean-squared": 0.5 * (pair + mean - 0.5 * mean**2),
        "number-outside-second-moment": 0.5 * (pair - 0.5 * second) + 0.25 * mean,
        "number-outside-mean-squared": 0.5 * (pair - 0.5 * mean**2) + 0.25 * mean,
    }


def delta_jz_appendix(
    spec: StateSpec,
    phi: float,
    cutoff: int | None = None,
    grouping: str = RESOLVED_GROUPING,
) -> float:
    """(Delta J_z)^2 at the interferometer output from the appendix series."""
    cutoff = _cutoff(spec, cutoff)
    cos_term = appendix_bracket_candidates(spec, cutoff)[grouping]
    mean, _ = series_number_moments(spec, cutoff)
    return math.cos(phi) ** 2 * cos_term + math.sin(phi) ** 2 * 0.25 * mean


def slope_appendix(spec: StateSpec, phi: float, cutoff: int | None = None) -> float:
    """|d<J_z>/dphi| series: 1/2 <N> sin(phi)."""
    mean, _ = series_number_moments(spec, _cutoff(spec, cutoff))
    return 0.5 * mean * math.sin(phi)


def resolve_appendix_grouping(spec: StateSpec, cutoff: int | None = None, tolerance=1e-8) -> list:
    """Groupings whose cos^2 coefficient equals the operator-algebra value (Delta N)^2 / 4."""
    cutoff = _cutoff(spec, cutoff)
    mean, second = series_number_moments(spec, cutoff)
    target = 0.25 * (second - mean**2)
    candidates = appendix_bracket_candidates(spec, cutoff)
    return [name for name in APPENDIX_GROUPINGS if abs(candidates[name] - target) <= tolerance]
