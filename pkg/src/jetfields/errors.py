"""Exception hierarchy.

Everything raised on purpose by this package derives from JetfieldsError,
so callers can catch one type at API boundaries.  Plain ValueError /
TypeError / IndexError still surface for garden-variety misuse
(bad index range, wrong argument type, malformed constructor input).
"""

from __future__ import annotations


class JetfieldsError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(JetfieldsError):
    """Operands live in rings with different variable counts."""


class OrderMismatch(JetfieldsError):
    """Jets compared or combined at incompatible truncation orders.

    Raised loudly instead of guessing: equality of jets is only defined
    when both sides carry the same precision.  Use ``equal_at`` to compare
    at an explicit order.
    """


class PrecisionExhausted(JetfieldsError):
    """An operation would produce a result with negative truncation order."""


class NotAUnit(JetfieldsError):
    """Multiplicative inversion of a jet with zero constant term."""


class NotContinuous(JetfieldsError):
    """A substitution image or map component has a nonzero constant term."""


class SingularMatrix(JetfieldsError):
    """Constant term of a matrix (or the linear part of a map) is not invertible."""


class NotNilpotent(JetfieldsError):
    """Flow of a field whose coefficients do not raise adic order.

    Exponentiating a derivation only terminates on jets when every
    coefficient has adic order at least 2.
    """


class NonConstantDivergence(JetfieldsError):
    """Decomposition requested for a field outside the constant-divergence class."""


class ConfigError(JetfieldsError):
    """Invalid verification-suite configuration."""


class ParseError(JetfieldsError):
    """Syntax or semantic error in series / field / map text.

    ``pos`` is the zero-based character offset into the input string.
    """

    def __init__(self, message: str, pos: int | None = None) -> None:
        self.pos = pos
        if pos is not None:
            message = f"col {pos + 1}: {message}"
        super().__init__(message)
