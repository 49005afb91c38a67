"""Exception hierarchy shared by all cove modules.

Anything raised intentionally by the library derives from CoveError so the
CLI can map it to a data/numeric exit code; everything else is a bug.
"""


class CoveError(Exception):
    """Base class for errors raised by cove."""


class ParseError(CoveError):
    """Malformed edge-list input."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class FormatError(CoveError):
    """Malformed embedding or clustering file."""


class ParameterError(CoveError):
    """Operation called with out-of-range or inconsistent parameters."""


class NumericError(CoveError):
    """An iterative numeric routine exhausted its budget."""


class GenerationError(CoveError):
    """Synthetic graph generation could not satisfy its constraints."""
