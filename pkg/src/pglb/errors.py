"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed program or data file; carries a 1-based source position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"{line}:{column}" if column is not None else str(line)
            message = f"{where}: {message}"
        super().__init__(message)


class MalformedCircuitError(ValueError):
    """Circuit violates its well-formedness rules (e.g. forward operand reference)."""


class InfeasibleArityError(ValueError):
    """The requested construction or sweep would not fit in memory or time."""


class StateSpaceCapExceeded(RuntimeError):
    """Service interaction explored more configurations than the configured cap."""
