"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised for malformed or out-of-range user input."""


class ChartMismatch(InputError):
    """Two symbolic objects live on different coordinate charts."""


class ParseError(InputError):
    """Expression syntax error; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DegreeOverflow(ArithmeticError):
    """Polynomial arithmetic exceeded the configured total-degree guard."""


class ComputationFailure(RuntimeError):
    """An internal consistency check failed; indicates a bug or a
    genuinely irregular input (e.g. a non-regular base point)."""
