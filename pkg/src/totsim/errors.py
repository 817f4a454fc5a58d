"""Exception types shared across the simulator."""


class TotsimError(Exception):
    """Base class for all simulator errors."""


class DimensionError(TotsimError):
    """Pattern lengths or unit indices do not line up."""


class ParameterError(TotsimError):
    """A numeric parameter is outside its documented range."""


class TrainingError(TotsimError):
    """Training input is empty or inconsistent."""


class ConfigError(TotsimError):
    """Malformed scenario configuration; carries the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class GenerationError(TotsimError):
    """Random lexicon generation could not satisfy its constraints."""


class CapacityError(TotsimError):
    """Exact enumeration was requested for a state space that is too large."""
