"""Exception hierarchy for the double-quantum-well solver."""


class DQWError(Exception):
    """Base class for all errors raised by :mod:`dqw`."""


class InvalidParameters(DQWError, ValueError):
    pass


class NonPositiveDimension(InvalidParameters):
    pass


class NonPositiveMass(InvalidParameters):
    pass


class NonPositivePotential(InvalidParameters):
    pass


class BarrierAboveConfinement(InvalidParameters):
    pass


class EnergyOutOfRange(DQWError, ValueError):
    pass


class PreconditionViolated(DQWError, ValueError):
    pass


class ParameterMismatch(DQWError, ValueError):
    """Two states passed together were solved for different wells."""


class NoBoundStates(DQWError):
    pass


class NotARoot(DQWError):
    """The supplied energy does not satisfy the spectrum condition."""


class RegimeUnsupported(DQWError):
    """Closed forms are only available below the central barrier top."""


class GridTooCoarse(DQWError):
    pass


class LevelNotFound(DQWError, LookupError):
    pass


class ConfigError(DQWError, ValueError):
    pass


class UnboundLevelRequested(UserWarning):
    """A sweep asked for a level that is not bound at some sweep points."""
