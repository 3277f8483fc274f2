"""Exception types shared across the package."""


class ZposcError(Exception):
    """Base class for all package-specific errors."""


class CapacityError(ZposcError):
    """A symbolic computation exceeded its configured size bound."""


class ValidityError(ZposcError):
    """Inputs violate a physical validity condition (e.g. weak coupling)."""


class ConvergenceError(ZposcError):
    """An iterative computation failed to reach the requested tolerance."""


class ConfigError(ZposcError):
    """A run configuration violates its invariants."""


class InsufficientDataError(ZposcError):
    """Too few samples for the requested statistical procedure."""
