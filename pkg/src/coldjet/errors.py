"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid user-supplied values or a violated precondition."""


class ParseError(InputError):
    """Malformed input file. ``line``/``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if column is not None:
            loc.append(f"column {column}")
        if loc:
            message = f"{', '.join(loc)}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class DomainError(ArithmeticError):
    """A model formula is singular or undefined at the requested point."""


class FitFailure(RuntimeError):
    """Every candidate fit diverged; ``partial`` holds the best attempt, if any."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
