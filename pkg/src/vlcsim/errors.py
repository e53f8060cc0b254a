"""Exception types shared across the simulator."""


class VlcsimError(Exception):
    """Base class for all vlcsim errors."""


class DegenerateSymbolError(VlcsimError, ValueError):
    """An operation required a nonconstant, non-zero symbol."""


class HermitianSymmetryError(VlcsimError, ValueError):
    """Frequency-domain bins are not a valid real-signal spectrum."""


class InvalidBiasError(VlcsimError, ValueError):
    """A biasing level lies outside the open dynamic range."""


class CurrentRangeError(VlcsimError, ValueError):
    """A drive current cannot be realized by the LED model."""


class DutyCycleError(VlcsimError, ValueError):
    """The requested brightness is unreachable with the given PWM forward ratio."""


class ConfigError(VlcsimError, ValueError):
    """Invalid experiment configuration; remembers the offending key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
