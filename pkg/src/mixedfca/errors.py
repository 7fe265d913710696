"""Exception hierarchy shared by every module."""


class MixedFCAError(Exception):
    """Base class for all library errors."""


class InputError(MixedFCAError, ValueError):
    """Invalid argument: unknown names, out-of-range parameters, bad shapes."""


class ParseError(InputError):
    """Malformed file content. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityError(MixedFCAError):
    """The requested enumeration exceeds a hard size guard."""
