class OscillatorError(Exception):
    """Base class of every error raised by the oscillators package."""


class InvalidArgumentError(OscillatorError, ValueError):
    pass


class UnsupportedOperationError(OscillatorError):
    pass


class NumericalFailureError(OscillatorError):
    def __init__(self, msg: str, diagnostics: dict = None):
        super().__init__(msg)
        self.diagnostics = diagnostics if diagnostics is not None else {}


class StabilityError(InvalidArgumentError):
    def __init__(self, msg: str, suggested_dt: float = None):
        super().__init__(msg)
        self.suggested_dt = suggested_dt


class NoPseudoBoundStateError(InvalidArgumentError):
    pass


class RangeTooSmallError(OscillatorError):
    pass


class ConfigError(InvalidArgumentError):
    pass
