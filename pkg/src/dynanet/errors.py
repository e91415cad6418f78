"""Shared exception types.

The CLI maps these onto exit codes: bad command lines exit 1, bad input data
(anything raising :class:`InputError`) exits 2, everything else exits 3.
"""


class InputError(ValueError):
    """Base class for problems with user-supplied data."""


class ParseError(InputError):
    """A file could not be parsed; messages include file and line number."""


class ValidationError(InputError):
    """Parsed data violates a documented precondition."""
