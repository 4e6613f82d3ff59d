"""Exceptions raised by dualprobe"""
from __future__ import annotations

from typing import Any


class DualProbeError(ValueError):
    """Base class of all dualprobe errors

    Attributes:
        code: The machine-readable error code
    """

    code = "ERROR"


class ParseError(DualProbeError):
    """Malformed input, with the position where it was found"""

    code = "PARSE_ERROR"

    def __init__(
        self,
        message: str,
        source: str | None = None,
        line: int | None = None,
        field: str | None = None,
    ) -> None:
        self.reason = message
        self.source = source
        self.line = line
        self.field = field
        position = []
        if source is not None:
            position.append(str(source))
        if line is not None:
            position.append(f"line {line}")
        if field is not None:
            position.append(f"field {field!r}")
        if position:
            message = f"{', '.join(position)}: {message}"
        super().__init__(message)


class PreconditionError(DualProbeError):
    """A parameter outside the range an operation accepts"""

    code = "PRECONDITION"

    def __init__(self, param: str, message: str) -> None:
        self.param = param
        super().__init__(f"{param}: {message}")


class ExhaustedError(DualProbeError):
    """The character input ended before enough characters were selected"""

    code = "EXHAUSTED"

    def __init__(self, selected: int, partial: Any = None) -> None:
        self.selected = selected
        self.partial = partial
        super().__init__(f"input exhausted after {selected} selection(s)")


class DuplicateInputError(DualProbeError):
    """Two input characters are equal"""

    code = "DUPLICATE_INPUT"

    def __init__(self, index: int, first: int) -> None:
        self.index = index
        self.first = first
        super().__init__(
            f"character #{index} repeats character #{first}"
        )


class InternalContradictionError(DualProbeError):
    """A coordinate would receive a second bit while building a witness"""

    code = "INTERNAL_CONTRADICTION"


class CharOutsideWindowError(DualProbeError):
    """A character has coordinates beyond the window"""

    code = "CHAR_OUTSIDE_WINDOW"

    def __init__(self, index: int, char: Any, width: int) -> None:
        self.index = index
        self.char = char
        self.width = width
        super().__init__(
            f"character #{index} {char} is not inside the window of width {width}"
        )


class UnsupportedFamilyError(DualProbeError):
    """No exact residue dynamics are available for the sequence family"""

    code = "UNSUPPORTED_FAMILY"


class PrecisionExceededError(DualProbeError):
    """The working precision is too small for the requested horizon"""

    code = "PRECISION_EXCEEDED"

    def __init__(self, required_bits: int, precision: int) -> None:
        self.required_bits = required_bits
        self.precision = precision
        super().__init__(
            f"{required_bits} bits of precision required, {precision} available"
        )
