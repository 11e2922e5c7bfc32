"""Exception types shared across the package."""


class NotPrimePower(ValueError):
    """Field order is not a prime power (or is < 2)."""


class TooLarge(ValueError):
    """Resource guard tripped (field order above 2^16, or enumeration too big)."""


class DivisionByZero(ZeroDivisionError):
    """Division or inversion of the zero field element."""


class FieldMismatch(ValueError):
    """Operands live over different fields."""


class DimensionMismatch(ValueError):
    """Matrix/vector dimensions do not agree."""


class SpaceMismatch(ValueError):
    """Operands belong to different NRT spaces, or the space has the wrong shape."""


class ZeroVector(ValueError):
    """A nonzero vector was required."""


class ZeroCode(ValueError):
    """The code is {0} and the requested quantity is undefined."""


class ParseError(ValueError):
    """Matrix-file syntax error, with a 1-based source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class HeaderError(ParseError):
    """Invalid matrix-file header."""


class RangeError(ParseError):
    """Matrix entry outside [0, q)."""
