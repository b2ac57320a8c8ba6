from typing import Optional


class HaarAffineError(ValueError):
    """Base class for every error raised by the library."""


class CapacityError(HaarAffineError):
    """A level, length or stored depth exceeds what the object can hold."""


class DomainError(HaarAffineError):
    """A numeric parameter lies outside the admissible range."""


class NonZeroMeanError(HaarAffineError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"Function must have mean zero, residual mean is {residual}")


class DualUndefinedError(HaarAffineError):
    def __init__(self, message: str = "symbol vanishes at origin; dual undefined"):
        super().__init__(message)


class ModeError(HaarAffineError):
    """Exact mode was asked to run a float-only operation."""


class InputParseError(HaarAffineError):
    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownSuiteError(HaarAffineError):
    def __init__(self, name: str, known):
        self.name = name
        super().__init__(f"Unknown verification suite '{name}'; known suites: {', '.join(known)}")


class SymbolHypothesisWarning(UserWarning):
    """A generator was used outside the parameter range its asymptotics assume."""
