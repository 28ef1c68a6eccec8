"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid deployment or scenario configuration (rejected before any run)."""


class FramingError(ValueError):
    """Codeword has the wrong length for its declared tag width."""


class RecordParseError(ValueError):
    """A data-record line failed to parse.

    Carries the offending field name and, when known, the 1-based line number.
    """

    def __init__(self, message, field=None, line_no=None):
        self.field = field
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
