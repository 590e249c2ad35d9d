"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class TruncationError(RuntimeError):
    """A certified series truncation would need more terms than the ceiling allows."""


class EstimationError(ValueError):
    """Count data cannot be turned into an efficiency estimate."""
