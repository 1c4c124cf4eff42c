"""Exception hierarchy; the CLI maps each family to a fixed exit code."""


class ClusterCutError(Exception):
    exit_code = 1


class ParseError(ClusterCutError, ValueError):
    """Malformed input file. Carries the 1-based line number when known."""

    exit_code = 2

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class CapError(ClusterCutError):
    """An instance exceeds a configured size or weight cap."""

    exit_code = 3


class WeightBoundError(CapError):
    pass


class InputError(ClusterCutError, ValueError):
    """An input violates an operation's precondition."""

    exit_code = 4


class ValidationError(InputError):
    """A structural property (regularity, linearity, ...) does not hold."""

    def __init__(self, message: str, failed: tuple[str, ...] = ()):
        self.failed = failed
        super().__init__(message)
