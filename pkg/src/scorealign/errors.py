"""Exception hierarchy for Scorealign.

Two families, mapped to CLI exit codes:
- ValidationError (exit 2): the input, score, bank or configuration is invalid
- InternalError (exit 1): a numerical routine misbehaved; indicates a bug

I/O failures are left as the builtin OSError family (exit 1).
"""


class ScoreAlignError(Exception):
    """Base class for all Scorealign errors."""


class ValidationError(ScoreAlignError):
    """Raised when user-supplied data or configuration is invalid."""


class InternalError(ScoreAlignError):
    """Raised when an algorithm violates its own guarantees."""


class ConfigError(ValidationError):
    """Raised for unknown or invalid configuration keys."""

    def __init__(self, key: str, message: str) -> None:
        self.key = key
        super().__init__(f"Invalid configuration '{key}': {message}")


class ScoreParseError(ValidationError):
    """Raised when a score document is not valid JSON or has the wrong shape."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        full_message = f"Score parse error: {message}"
        if line is not None:
            full_message += f" (line {line})"
        super().__init__(full_message)


class ScoreValidationError(ValidationError):
    """Raised when a score event violates the note invariants."""

    def __init__(self, message: str, event_index: int | None = None) -> None:
        self.event_index = event_index
        prefix = f"Score event {event_index}: " if event_index is not None else ""
        super().__init__(f"{prefix}{message}")


class FrontendError(ValidationError):
    """Raised for audio or spectrogram input the frontend cannot process."""


class FormatError(ValidationError):
    """Raised when a persisted file does not match its declared format."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}")


class TemplateMissingError(ValidationError):
    """Raised when a (pitch, instrument) pair has no template in the bank."""

    def __init__(self, pitch: int, instrument: str) -> None:
        self.pitch = pitch
        self.instrument = instrument
        super().__init__(f"template missing: ({pitch}, {instrument})")


class ConfigMismatchError(ValidationError):
    """Raised when two objects were built under different frontend configs."""

    def __init__(self, expected: object, actual: object) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"frontend config mismatch: expected {expected}, got {actual}")


class SilentRecordingError(ValidationError):
    """Raised when a training recording has no frame above the energy gate."""

    def __init__(self, pitch: int, instrument: str) -> None:
        self.pitch = pitch
        self.instrument = instrument
        super().__init__(f"silent recording for ({pitch}, {instrument})")


class RenderError(ValidationError):
    """Raised when a score unit cannot be rendered or fitted."""


class AlignmentError(ValidationError):
    """Raised when no valid alignment path exists."""


class EvaluationError(ValidationError):
    """Raised for inconsistent evaluation inputs."""


class ConvergenceError(InternalError):
    """Raised when multiplicative updates increase the objective."""

    def __init__(self, iteration: int, previous: float, current: float) -> None:
        self.iteration = iteration
        self.previous = previous
        self.current = current
        super().__init__(
            f"objective increased at iteration {iteration}: {previous:.12g} -> {current:.12g}"
        )


class NNLSError(InternalError):
    """Raised when the active-set solver exceeds its iteration budget."""

    def __init__(self, iterations: int, n_notes: int) -> None:
        self.iterations = iterations
        self.n_notes = n_notes
        super().__init__(f"NNLS did not terminate within {iterations} iterations ({n_notes} notes)")
