"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class NumericError(ArithmeticError):
    """A computation produced non-finite intermediate values."""


class RefusalError(DomainError):
    """The request is well-formed but too expensive to honour."""


class NoCornerError(DomainError):
    """An L-curve sweep has no usable corner."""


class WavParseError(ValueError):
    """Malformed RIFF/WAVE data.

    Attributes
    ----------
    offset : int
        Byte offset at which parsing failed.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class UnsupportedFormatError(ValueError):
    """Well-formed WAV data using a format this package does not read."""

    def __init__(self, field, value, expected):
        super().__init__(f"unsupported {field}: {value!r} (expected {expected})")
        self.field = field
        self.value = value
