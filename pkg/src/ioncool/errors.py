"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A run configuration failed schema validation."""


class ConvergenceError(RuntimeError):
    """An iterative solver ran out of iterations.

    Carries the last residual so callers can decide whether the partial
    result is usable.
    """

    def __init__(self, message, residual=None, best=None):
        super().__init__(message)
        self.residual = residual
        self.best = best


class InstabilityError(ValueError):
    """The chain is not confined (Hessian not positive definite)."""


class DegenerateModeError(ValueError):
    """Mode frequencies too close for a well-defined perturbative step."""


class GuardError(ValueError):
    """A combinatorial guard was exceeded (e.g. too many placements)."""


class CalibrationError(RuntimeError):
    """A calibration target cannot be met by any parameter value."""
