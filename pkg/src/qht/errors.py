"""Exception types shared across the package."""


class QhtError(Exception):
    """Base class for errors raised by this package."""


class NotHermitianError(QhtError):
    """A matrix expected to be Hermitian was not (beyond tolerance)."""


class NoConvergenceError(QhtError):
    """An iterative eigenvalue or decomposition routine failed to converge."""


class EmptyNullSpaceError(QhtError):
    """A matrix has no numerical null space at the requested tolerance."""


class InvalidSpecError(QhtError):
    """A system specification violates one or more model constraints."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvalidStepError(QhtError):
    """Integrator step parameters out of range (dt, t_final, sampling)."""


class PhysicalityLostError(QhtError):
    """An evolved state drifted outside density-matrix tolerances."""


class InsufficientSamplesError(QhtError):
    """A trajectory analysis window contains too few samples."""


class InfiniteTemperatureError(QhtError):
    """Local temperature undefined: level populations are equal."""


class DegenerateQubitError(QhtError):
    """Local temperature undefined: the qubit splitting is zero."""


class ConfigError(QhtError):
    """A run configuration failed to parse or validate."""

    def __init__(self, message, field=None, line=None):
        super().__init__(message)
        self.field = field
        self.line = line
