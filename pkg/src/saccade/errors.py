"""Exception types shared across the engine."""


class SaccadeError(Exception):
    """Base class for engine errors."""


class ConfigError(SaccadeError):
    """Invalid scenario or planner configuration."""


class FrameRejected(SaccadeError):
    """Observation frame violates its contract (shape, range or fixation mismatch)."""


class BeliefContradiction(SaccadeError):
    """Free energy is undefined: evidence has zero likelihood under the model."""


class ProtocolError(SaccadeError):
    """A wire message could not be parsed. `line` carries the offending input."""

    def __init__(self, message: str, line: bytes | str = b""):
        super().__init__(message)
        self.line = line if isinstance(line, bytes) else line.encode("utf-8", "replace")
