"""Exception types raised by motor_tp."""


class MotorTPError(ValueError):
    """Base class for all input and pipeline errors."""


class ParseError(MotorTPError):
    """Malformed motion-capture CSV; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)


class DegenerateError(MotorTPError):
    """A variance fell below the configured floor."""


class AnalysisError(MotorTPError):
    """The throughput pipeline cannot produce a report for the inputs."""
