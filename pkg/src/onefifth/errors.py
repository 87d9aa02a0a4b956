"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Input vector does not match the function/algorithm dimension."""


class ConstructionError(ValueError):
    """Invalid parameters when building an objective function."""


class InsufficientDataError(ValueError):
    """Not enough samples for the requested estimate."""


class ChainDegenerateError(RuntimeError):
    """Normalized chain reached the excluded state z = 0."""


class EvaluationError(RuntimeError):
    """Objective returned a non-finite value during a run."""


class CalibrationError(RuntimeError):
    """CLT calibration produced an unusable variance estimate."""


class ConfigError(ValueError):
    """Experiment configuration is malformed or inconsistent."""
