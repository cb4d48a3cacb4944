"""Exception taxonomy shared across the package."""


class So4AtomError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(So4AtomError):
    """API misuse: mixed registries, mixed spin modes, bad arguments."""


class DomainError(So4AtomError):
    """Mathematically ill-posed request: division by a non-invertible
    expression, substituting zero into a negative power, and so on."""


class LangError(So4AtomError):
    """Tokenizer / parser / elaborator error.  Carries the source span
    (start, end offsets) when one is known."""

    def __init__(self, message, span=None):
        self.span = span
        if span is not None:
            message = f"{message} (at {span[0]}..{span[1]})"
        super().__init__(message)


class SolverError(So4AtomError):
    """Numerical backend failure (eigensolver non-convergence etc.)."""
