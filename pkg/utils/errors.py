# errors.py
#
# Exception hierarchy shared by the engine, the oracle and the command line.


class VertexError(Exception):
    """Root of every error raised by this package."""


class ShapeError(VertexError, ValueError):
    """Non-conforming shapes, wrong vector lengths or out-of-range indices."""


class SingularMatrixError(VertexError, ArithmeticError):
    """Inverse requested for a singular matrix."""


class InvalidModelError(VertexError, ValueError):
    """A model with delta = 0 was used where a valid one is required."""


class EncodingError(VertexError, ValueError):
    """Malformed matrix encoding or edge list."""


class QueryError(VertexError, ValueError):
    """Malformed correlation query: duplicate edges, wrong axis, wrong count."""


class CapExceededError(VertexError, ValueError):
    """A configured size cap would be exceeded."""


class DyadicError(VertexError, ValueError):
    """A value is not a probability with a power-of-two denominator."""


class UnknownSuiteError(VertexError, KeyError):
    """Verification suite name not known."""
