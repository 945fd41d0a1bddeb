"""Exception hierarchy shared across the package."""


class GGError(Exception):
    """Base class for all package errors."""


class MapError(GGError):
    """Malformed or invalid semantic map file."""


class ProgramError(GGError):
    """Activity-program syntax or binding failure."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnbindableReferenceError(ProgramError):
    """A program item reference cannot be bound to a map item."""


class TemplateError(GGError):
    """Unknown or malformed narration template."""


class BackendError(GGError):
    """Scoring backend construction or tokenization failure."""


class BackendUnavailableError(BackendError):
    """Remote backend refused, timed out, or returned a non-200 response."""


class OracleTooLargeError(GGError):
    """Exhaustive oracle instance exceeds the enumeration guard."""

    def __init__(self, size, limit):
        super().__init__(
            f"enumeration size {size} exceeds guard of {limit} sequences"
        )
        self.size = size
        self.limit = limit


class ConfigError(GGError):
    """Invalid experiment configuration or missing input file."""
