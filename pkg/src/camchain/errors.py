"""Exception types shared across the package."""


class CamchainError(Exception):
    """Base class for all package-specific errors."""


class GeometryError(CamchainError, ValueError):
    """Degenerate or invalid geometric input (polygon, road frame, ...)."""


class ConfigError(CamchainError, ValueError):
    """A configuration violates a validity constraint (topology, scenario, matcher)."""


class ParseError(CamchainError, ValueError):
    """A file could not be parsed; message carries location where known."""


class MalformedInputError(CamchainError, ValueError):
    """Runtime input breaks a precondition (duplicate track keys, bad record)."""


class CausalityError(CamchainError, RuntimeError):
    """Time or frame ordering went backwards where monotonicity is required."""


class InsufficientHistoryError(CamchainError, ValueError):
    """Not enough samples in a sliding window to evaluate an estimator."""
