"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A required input or parameter combination is missing or inconsistent."""


class DataFormatError(ValueError):
    """An input file violates its documented schema. Carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
