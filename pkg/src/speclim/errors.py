"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract.

    Raised when a bracketed solve finds no sign change, a closed form
    disagrees with its quadrature cross-check, or a linear solve returns
    non-finite values.
    """


class ConfigError(ValueError):
    """An experiment configuration is malformed or invalid."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
