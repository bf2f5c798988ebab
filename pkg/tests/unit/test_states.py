import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fock_phase import series
from fock_phase.errors import (
    InvalidSpecError,
    MissingParameterError,
    TruncationError,
    ZeroStateError,
)
from fock_phase.fock import FockVector
from fock_phase.states import (
    LimitingState,
    OperationKind,
    StateSpec,
    build_state,
    default_dim,
    limiting_state,
)

ADD, SUBTRACT = OperationKind.ADD, OperationKind.SUBTRACT


def test_default_dim():
    assert default_dim(StateSpec(ADD, 1, 1, 1.0)) == 1 + 1 + 13 + 16


@pytest.mark.parametrize(
    "spec",
    [
        StateSpec(ADD, 0, 0, 1.0),
        StateSpec(ADD, 2, 1, 1.0),
        StateSpec(SUBTRACT, 1, 1, 0.5, math.pi / 4),
        StateSpec(SUBTRACT, 3, 2, 2.0, math.pi),
        StateSpec(ADD, 3, 3, 4.0, 1.0),
    ],
    ids=str,
)
def test_build_state_is_certified(spec):
    state = build_state(spec)
    assert np.sum(state.probabilities) == pytest.approx(1.0, abs=1e-10)
    assert state.tail_mass < 1e-12
    assert state.normalization == pytest.approx(
        series.normalization_constant(spec, state.dim), rel=1e-8
    )


def test_global_phase_convention():
    state = build_state(StateSpec(SUBTRACT, 1, 2, 1.2, 2.0))
    magnitudes = np.abs(state.amplitudes)
    first = state.amplitudes[np.argmax(magnitudes > 1e-14 * magnitudes.max())]
    assert first.imag == pytest.approx(0.0, abs=1e-15)
    assert first.real > 0


def test_coherent_limit_matches_coherent_state():
    spec = limiting_state("coherent", alpha=1.5j)
    state = build_state(spec)
    assert state.fidelity(FockVector.coherent(1.5j, state.dim)) == pytest.approx(1.0, abs=1e-12)


def test_fock_limit_is_basis_state():
    state = build_state(limiting_state(LimitingState.FOCK, n=3))
    assert state.probabilities[3] == pytest.approx(1.0)


def test_pscs_equals_coherent():
    state = build_state(limiting_state("pscs", count=2, alpha=1.0))
    assert state.fidelity(FockVector.coherent(1.0, state.dim)) == pytest.approx(1.0, abs=1e-10)


def test_limiting_state_specs():
    assert limiting_state("dfs", n=2, alpha=1.0) == StateSpec(ADD, 0, 2, 1.0)
    assert limiting_state("pacs", count=1, alpha=-1.0) == StateSpec(ADD, 1, 0, 1.0, math.pi)


def test_limiting_state_missing_parameter():
    with pytest.raises(MissingParameterError):
        limiting_state("dfs", alpha=1.0)


def test_limiting_state_unknown():
    with pytest.raises(InvalidSpecError):
        limiting_state("squeezed", alpha=1.0)


@pytest.mark.parametrize(
    "spec",
    [
        StateSpec(ADD, -1, 0, 1.0),
        StateSpec(ADD, 0, 0, 9.0),
        StateSpec(SUBTRACT, 0, 40, 1.0),
        StateSpec(ADD, 0, 0, 1.0, float("nan")),
    ],
)
def test_invalid_spec(spec):
    with pytest.raises(InvalidSpecError):
        build_state(spec)


def test_subtracting_past_the_fock_state_at_zero_displacement():
    with pytest.raises(ZeroStateError):
        build_state(StateSpec(SUBTRACT, 2, 1, 0.0))


def test_explicit_dim_too_small():
    with pytest.raises(TruncationError):
        build_state(StateSpec(ADD, 0, 0, 3.0), dim=12)


def test_dim_cap_exhausted():
    with pytest.raises(TruncationError):
        build_state(StateSpec(ADD, 0, 0, 3.0), dim_cap=16)


def test_invalid_tolerance():
    with pytest.raises(InvalidSpecError):
        build_state(StateSpec(ADD, 0, 0, 1.0), tolerance=1e-3)


def test_record_round_trip():
    spec = StateSpec(SUBTRACT, 2, 1, 0.5, 0.25)
    assert StateSpec.from_record(spec.as_record()) == spec


def test_record_missing_key():
    with pytest.raises(MissingParameterError):
        StateSpec.from_record({"kind": "add", "count": 1})


def test_str():
    assert str(StateSpec(ADD, 1, 2, 0.5)) == "+1|n=2,|a|=0.5,t2=0"


@settings(deadline=None, max_examples=25)
@given(
    kind=st.sampled_from(list(OperationKind)),
    count=st.integers(0, 3),
    n=st.integers(0, 3),
    magnitude=st.floats(0.1, 2.0),
    theta2=st.floats(-math.pi, math.pi),
)
def test_theta2_only_rotates_amplitudes(kind, count, n, magnitude, theta2):
    spec = StateSpec(kind, count, n, magnitude)
    reference = build_state(spec)
    rotated = build_state(spec.with_phase(theta2), dim=reference.dim)
    np.testing.assert_allclose(
        np.abs(rotated.amplitudes), np.abs(reference.amplitudes), atol=1e-13
    )
