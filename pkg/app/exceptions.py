"""
Custom exceptions for the STE simulator.

Following the fail-fast principle, we define specific exceptions
that propagate errors clearly instead of silently catching them.
"""


class SimulationError(Exception):
    """Base exception for all simulator errors."""
    pass


class InvalidArgumentError(SimulationError):
    """Raised when an operation receives malformed input (shapes, horizons)."""
    pass


class BudgetExceededError(SimulationError):
    """Raised when a request exceeds the enumeration, cell or FLOP budget."""
    pass


class EmptyDataError(SimulationError):
    """Raised when an emitter is handed nothing to draw."""
    pass


class ConfigParseError(SimulationError):
    """Raised when a flat config file or override fails validation."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        location = []
        if key is not None:
            location.append(f"key '{key}'")
        if line is not None:
            location.append(f"line {line}")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class EmissionError(SimulationError):
    """Raised when writing an artifact fails."""

    def __init__(self, message: str, path):
        self.path = path
        super().__init__(f"{path}: {message}")
