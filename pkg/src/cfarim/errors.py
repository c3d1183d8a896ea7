"""Exception hierarchy shared by the library and the command line front end."""


class CfarImError(Exception):
    """Base class for every error raised by :mod:`cfarim`."""


class TargetOutOfBand(CfarImError, ValueError):
    pass


class EmptyConfig(CfarImError, ValueError):
    pass


class ZeroPowerReference(CfarImError, ValueError):
    pass


class SignalTooShort(CfarImError, ValueError):
    pass


class ColaViolation(CfarImError, ValueError):
    pass


class RowTooShort(CfarImError, ValueError):
    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class ShapeMismatch(CfarImError, ValueError):
    pass


class ZeroReference(CfarImError, ValueError):
    pass


class ZeroSignal(CfarImError, ValueError):
    pass


class PipelineError(CfarImError):
    """A pipeline stage failed; ``stage`` names the step (stft, cfar, ...)."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


class ConfigError(CfarImError, ValueError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.line = line


class FormatError(CfarImError, ValueError):
    pass


class IoError(CfarImError, OSError):
    """A file could not be opened, read or written."""
