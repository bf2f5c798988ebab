import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln

from fock_phase import fock, oracle, series
from fock_phase.errors import InvalidSpecError, TruncationOverflowError, ZeroStateError
from fock_phase.fock import FockVector, RawFockVector
from fock_phase.states import OperationKind, StateSpec


def _raw(*amplitudes, dim=None):
    values = np.zeros(dim or len(amplitudes), dtype=complex)
    values[: len(amplitudes)] = amplitudes
    return RawFockVector(values)


@pytest.mark.parametrize("k, expected", [(0, 0.0), (1, 0.0), (20, 42.3356164608)])
def test_log_factorial(k, expected):
    assert fock.log_factorial(k) == pytest.approx(expected, rel=1e-11, abs=1e-14)


def test_log_factorial_matches_exact_product():
    assert fock.log_factorial(30) == pytest.approx(math.log(math.factorial(30)), rel=1e-12)


def test_log_factorial_rejects_negative():
    with pytest.raises(InvalidSpecError):
        fock.log_factorial(-1)


def test_log_factorial_handles_large_k():
    assert np.isfinite(fock.log_factorial(1000))


def test_displaced_vacuum_is_vacuum():
    raw = fock.displaced_fock_amplitudes(0, 0.0, 8)
    np.testing.assert_allclose(raw.amplitudes, [1, 0, 0, 0, 0, 0, 0, 0])


def test_undisplaced_fock_state():
    raw = fock.displaced_fock_amplitudes(2, 0.0, 8)
    expected = np.zeros(8)
    expected[2] = 1.0
    np.testing.assert_allclose(raw.amplitudes, expected, atol=1e-15)


def test_coherent_limit():
    raw = fock.displaced_fock_amplitudes(0, 1.0, 32)
    m = np.arange(32)
    expected = np.exp(-0.5 - 0.5 * gammaln(m + 1))
    np.testing.assert_allclose(raw.amplitudes.real, expected, rtol=1e-10, atol=1e-300)
    assert raw.amplitudes[0].real == pytest.approx(0.6065306597, abs=1e-10)


def test_displaced_fock_norm_and_phase():
    raw = fock.displaced_fock_amplitudes(2, 1.5 * np.exp(0.7j), 64)
    assert raw.norm_sq == pytest.approx(1.0, abs=1e-12)
    rotated = fock.displaced_fock_amplitudes(2, 1.5, 64)
    np.testing.assert_allclose(np.abs(raw.amplitudes), np.abs(rotated.amplitudes), atol=1e-15)


def test_displaced_fock_rejects_small_dim():
    with pytest.raises(InvalidSpecError):
        fock.displaced_fock_amplitudes(3, 1.0, 3)


def test_apply_creation_on_vacuum():
    result = fock.apply_creation(_raw(1, 0, 0, 0), 1)
    np.testing.assert_allclose(result.amplitudes, [0, 1, 0, 0])
    assert result.norm_sq == pytest.approx(1.0)


def test_apply_creation_on_one_photon():
    result = fock.apply_creation(_raw(0, 1, 0, 0), 1)
    assert result.amplitudes[2] == pytest.approx(math.sqrt(2))
    assert result.norm_sq == pytest.approx(2.0)


def test_apply_creation_twice_on_coherent():
    # <(N+1)(N+2)> = <N^2> + 3<N> + 2 for a Poisson mean of 1
    raw = fock.displaced_fock_amplitudes(0, 1.0, 32)
    norm_sq = fock.apply_creation(raw, 2).norm_sq
    assert norm_sq == pytest.approx(7.0, abs=1e-8)

    a, a_dagger = oracle.ladder_matrices(40)
    pair = a.power(2) @ a_dagger.power(2)
    expected = oracle.oracle_expectation(FockVector.coherent(1.0, 40), pair)
    assert norm_sq == pytest.approx(expected.real, abs=1e-8)


def test_apply_creation_without_headroom():
    with pytest.raises(TruncationOverflowError):
        fock.apply_creation(_raw(0, 0, 0, 1), 1)


def test_apply_annihilation_on_one_photon():
    result = fock.apply_annihilation(_raw(0, 1, 0), 1)
    np.testing.assert_allclose(result.amplitudes, [1, 0, 0])


def test_apply_annihilation_on_vacuum():
    with pytest.raises(ZeroStateError):
        fock.apply_annihilation(_raw(1, 0, 0), 1)


def test_apply_annihilation_on_coherent():
    raw = fock.displaced_fock_amplitudes(0, 1.0, 32)
    assert fock.apply_annihilation(raw, 1).norm_sq == pytest.approx(1.0, abs=1e-8)


def test_normalize():
    state, constant = fock.normalize(_raw(2, 0))
    np.testing.assert_allclose(state.amplitudes, [1, 0])
    assert constant == 0.5

    state, constant = fock.normalize(_raw(1, 1))
    np.testing.assert_allclose(state.amplitudes, [1 / math.sqrt(2)] * 2)
    assert constant == pytest.approx(1 / math.sqrt(2))


def test_normalize_zero_state():
    with pytest.raises(ZeroStateError):
        fock.normalize(_raw(0, 0))


def test_normalization_constant_matches_series():
    raw = fock.apply_creation(fock.displaced_fock_amplitudes(1, 1.0, 48), 1)
    _, constant = fock.normalize(raw)
    spec = StateSpec(OperationKind.ADD, 1, 1, 1.0)
    assert constant == pytest.approx(series.normalization_constant(spec, 48), rel=1e-8)


def test_fock_vector_requires_unit_norm():
    with pytest.raises(InvalidSpecError):
        FockVector(np.array([1.0, 1.0]))


def test_tail_mass():
    state = FockVector.basis(9, 10)
    assert state.tail_mass == 1.0
    assert FockVector.basis(0, 10).tail_mass == 0.0


def test_ladder_moment_examples():
    assert fock.ladder_moment(FockVector.basis(1, 4), 1, 1) == pytest.approx(1.0)
    coherent = FockVector.coherent(1.0, 40)
    assert fock.ladder_moment(coherent, 0, 1) == pytest.approx(1.0 + 0j, abs=1e-10)


def test_number_moments():
    assert fock.number_moments(FockVector.basis(3, 6)) == pytest.approx((3, 0, 9))
    assert fock.number_moments(FockVector.coherent(1.0, 40)) == pytest.approx(
        (1, 1, 2), abs=1e-8
    )


def _random_vector(seed, dim, headroom=0):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    if headroom:
        values[-headroom:] = 0
    return values


@settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(3, 12))
def test_ladder_adjointness(seed, dim):
    psi = RawFockVector(_random_vector(seed, dim, headroom=1))
    phi = RawFockVector(_random_vector(seed + 1, dim))
    left = np.vdot(fock.apply_creation(psi, 1).amplitudes, phi.amplitudes)
    right = np.vdot(psi.amplitudes, fock.apply_annihilation(phi, 1).amplitudes)
    assert abs(left - right) <= 1e-10 * max(1.0, abs(left))


@settings(deadline=None, max_examples=40)
@given(
    seed=st.integers(0, 2**32 - 1),
    j=st.integers(0, 3),
    k=st.integers(0, 3),
)
def test_ladder_moment_conjugate_symmetry(seed, j, k):
    state, _ = fock.normalize(RawFockVector(_random_vector(seed, 10)))
    forward = fock.ladder_moment(state, j, k)
    backward = fock.ladder_moment(state, k, j)
    assert abs(forward - np.conj(backward)) <= 1e-12 * max(1.0, abs(forward))
