"""Exception hierarchy mapped to CLI exit code families."""


class SentactError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigurationError(SentactError):
    """Invalid configuration, parameters, or cross-references (exit 2)."""

    exit_code = 2


class DataError(SentactError):
    """Missing or malformed input data (exit 3)."""

    exit_code = 3


class NumericError(SentactError):
    """Numerically invalid operation: zero norms, shape mismatches,
    degenerate series (exit 4)."""

    exit_code = 4


class StageError(SentactError):
    """Pipeline stage failure; wraps the causing error and keeps its exit code."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
        if isinstance(cause, SentactError):
            self.exit_code = cause.exit_code
