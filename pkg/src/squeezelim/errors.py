"""Exception types shared across the package."""


class ThresholdError(ValueError):
    """Internal gain at or beyond the parametric oscillation threshold.

    The linearized noise model is only meaningful strictly below threshold;
    evaluating at or above it must fail loudly instead of returning garbage.
    """


class BracketError(RuntimeError):
    """A root/half-maximum search could not bracket its target."""


class NonConvergenceError(RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class ConfigError(ValueError):
    """A scenario configuration failed to parse or validate."""

    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")
