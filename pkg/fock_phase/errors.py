class PhaseError(Exception):
    """Base class for all errors raised by fock_phase.

    ``exit_code`` is the status the CLI exits with when the error escapes a task.
    """

    exit_code = 1


class ConfigError(PhaseError):
    pass


class InvalidSpecError(PhaseError, ValueError):
    exit_code = 2


class MissingParameterError(InvalidSpecError):
    pass


class InvalidGridError(InvalidSpecError):
    pass


class SlopeSingularError(InvalidSpecError):
    """The phase grid touches a zero of d<J_z>/dphi."""


class TruncationError(PhaseError):
    exit_code = 3


class TruncationOverflowError(TruncationError):
    """Ladder action pushed non-negligible weight past the top of the basis."""


class OutOfRangeError(TruncationError, ValueError):
    pass


class QuadratureError(TruncationError):
    pass


class OracleConvergenceError(TruncationError):
    pass


class ZeroStateError(PhaseError):
    exit_code = 4


class DimensionMismatchError(PhaseError, ValueError):
    pass


class NoPhaseReferenceError(PhaseError):
    """U or Q requested for a state with no phase reference (e.g. a Fock state)."""
