"""Exact rational coefficients.

All arithmetic in this package is exact over the rationals.  ``Q`` is the
coefficient constructor: gmpy2's mpq when available (noticeably faster on
the verification suite), otherwise the stdlib Fraction.  Both expose the
same numerator/denominator protocol and print reduced ``p/q`` strings, so
the rest of the package never needs to know which one is active.

Floats are rejected everywhere.  A float argument is almost always an
accident that would silently smuggle binary rounding noise into an exact
computation, so coercion fails fast instead.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

try:
    from gmpy2 import mpq as Q

    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction
    BACKEND = "fractions"

RationalLike = Union[int, str, Rational]


def as_rational(value: RationalLike) -> "Q":
    """Coerce ``value`` to the active coefficient type.

    Accepts ints, rationals of either backend, and strings like ``"-3/2"``.
    """
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int, rational, or 'p/q' string")
    if isinstance(value, str):
        return Q(value.strip())
    if isinstance(value, (int, Rational)):
        return Q(value)
    if type(value) is type(Q(0)):
        return value
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rational_str(value: Rational) -> str:
    """Canonical reduced string, ``p`` or ``p/q`` with q > 0."""
    return str(value)
