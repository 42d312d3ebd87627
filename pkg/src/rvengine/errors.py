"""Exception types shared across the package."""


class RVEngineError(Exception):
    """Base class for engine errors."""


class ParseError(RVEngineError):
    """Malformed tick-file content; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"{message} (line {line})" if line is not None else message)


class IntegrityError(RVEngineError):
    """Stored day exists but cannot be read back consistently."""


class CalendarRangeError(RVEngineError):
    """Requested date falls outside the calendar's supported range."""


class EstimationError(RVEngineError):
    """Model estimation refused or failed."""


class ForecastError(RVEngineError):
    """Forecast refused (insufficient post-sample data)."""
