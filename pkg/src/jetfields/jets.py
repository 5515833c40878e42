"""Truncated multivariate power series with exact rational coefficients.

A jet is a power series in variables x1..xn known exactly through total
degree ``order`` and unknown beyond it.  Terms are stored sparsely as a
map from exponent tuples to nonzero rationals; zero coefficients are never
stored, so equal jets have equal dicts.

Precision is tracked per jet and every operation returns the largest
order its result can honestly claim:

* ``+``, ``-``, ``*``            -> min of the operand orders
* ``partial_derivative``         -> order - 1
* ``substitute``                 -> min of the jet's order and the image orders
* ``invert_unit``                -> order preserved
* ``truncate``                   -> explicit downgrade (never up)

Equality between jets of different orders raises OrderMismatch rather
than guessing which precision was meant; ``equal_at`` compares prefixes
at an explicit order.

Variable indices in the public API are 1-based, matching the x1..xn
naming used by the text syntax; raw exponent tuples are ordinary Python
tuples indexed from 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from operator import add as _iadd
from typing import Iterator, Mapping, Sequence

from .errors import (
    DimensionMismatch,
    NotAUnit,
    NotContinuous,
    OrderMismatch,
    PrecisionExhausted,
)
from .rationals import Q, RationalLike, as_rational

Monomial = tuple[int, ...]

_ZERO = Q(0)
_ONE = Q(1)


def grlex_key(exps: Monomial) -> tuple[int, tuple[int, ...]]:
    """Sort key for the canonical term order.

    Ascending total degree; within a degree, higher powers of earlier
    variables come first (x1^2 before x1*x2 before x2^2).
    """
    return (sum(exps), tuple(-e for e in exps))


def sorted_monomials(terms: Mapping[Monomial, "Q"]) -> list[Monomial]:
    return sorted(terms, key=grlex_key)


# -- raw term-dict arithmetic ------------------------------------------------
#
# These helpers operate on plain {exponent tuple: coefficient} dicts with no
# validation, so the heavy inner loops stay free of object overhead.  All
# callers guarantee exponent tuples of uniform length and nonzero values.


def _add_terms(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = c
        else:
            s = v + c
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def _scale_terms(t: dict, c) -> dict:
    if not c:
        return {}
    return {e: c * v for e, v in t.items()}


def _mul_terms(a: dict, b: dict, cap: int) -> dict:
    """Product of two term dicts, discarding degrees above ``cap``."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    bseq = sorted(((sum(e), e, c) for e, c in b.items()))
    out: dict = {}
    for ea, ca in a.items():
        room = cap - sum(ea)
        if room < 0:
            continue
        for db, eb, cb in bseq:
            if db > room:
                break
            key = tuple(map(_iadd, ea, eb))
            v = out.get(key)
            out[key] = ca * cb if v is None else v + ca * cb
    return {e: c for e, c in out.items() if c}


def _derive_terms(t: dict, j: int) -> dict:
    """d/dx_{j+1} without the order bookkeeping (j is 0-based here)."""
    out = {}
    for e, c in t.items():
        k = e[j]
        if k:
            out[e[:j] + (k - 1,) + e[j + 1 :]] = c * k
    return out


def _subst_terms(terms: dict, images: Sequence[dict], cap: int, nres: int) -> dict:
    """Evaluate a polynomial at ``images`` by nested Horner evaluation.

    ``terms`` is keyed by exponents over len(images) variables; each image
    is a term dict over ``nres`` variables.  Grouping on the leading
    variable and folding from the highest power down means each variable's
    image is multiplied in once per power instead of once per term.
    """
    if not terms:
        return {}
    if not images:
        c = terms.get(())
        return {(0,) * nres: c} if c else {}
    groups: dict[int, dict] = {}
    for e, c in terms.items():
        groups.setdefault(e[0], {})[e[1:]] = c
    head, rest = images[0], images[1:]
    acc: dict = {}
    for power in range(max(groups), -1, -1):
        if acc:
            acc = _mul_terms(acc, head, cap)
        sub = groups.get(power)
        if sub is not None:
            acc = _add_terms(acc, _subst_terms(sub, rest, cap, nres))
    return acc


def _clip_terms(t: dict, cap: int) -> dict:
    return {e: c for e, c in t.items() if sum(e) <= cap}


# -- jets ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False, repr=False)
class Jet:
    """A power series in n variables, exact through total degree ``order``."""

    n: int
    order: int
    terms: Mapping[Monomial, "Q"]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"variable count must be a positive int, got {self.n!r}")
        if not isinstance(self.order, int) or self.order < 0:
            raise ValueError(f"truncation order must be a non-negative int, got {self.order!r}")
        canon: dict[Monomial, Q] = {}
        for exps, coeff in self.terms.items():
            e = tuple(exps)
            if len(e) != self.n or any(not isinstance(p, int) or p < 0 for p in e):
                raise ValueError(f"bad exponent tuple {exps!r} for {self.n} variables")
            if sum(e) > self.order:
                raise ValueError(
                    f"term of degree {sum(e)} exceeds truncation order {self.order}"
                )
            c = as_rational(coeff)
            if c:
                canon[e] = c
        object.__setattr__(self, "terms", canon)

    # construction helpers

    @classmethod
    def _raw(cls, n: int, order: int, terms: dict) -> "Jet":
        # Internal fast path: callers guarantee canonical terms (tuple keys
        # of length n, degrees <= order, nonzero Q values).
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def zero(cls, n: int, order: int) -> "Jet":
        return cls(n, order, {})

    @classmethod
    def constant(cls, n: int, order: int, value: RationalLike) -> "Jet":
        return cls(n, order, {(0,) * n: as_rational(value)})

    @classmethod
    def variable(cls, n: int, order: int, i: int) -> "Jet":
        """The coordinate x_i (1-based), as a jet of the given order."""
        if not 1 <= i <= n:
            raise IndexError(f"variable index {i} out of range 1..{n}")
        if order < 1:
            raise PrecisionExhausted("a coordinate jet needs order >= 1")
        exps = tuple(1 if k == i - 1 else 0 for k in range(n))
        return cls(n, order, {exps: _ONE})

    @classmethod
    def monomial(cls, n: int, order: int, exps: Sequence[int], coeff: RationalLike = 1) -> "Jet":
        return cls(n, order, {tuple(exps): as_rational(coeff)})

    # inspection

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant_term(self) -> "Q":
        return self.terms.get((0,) * self.n, _ZERO)

    def coefficient(self, exps: Sequence[int]) -> "Q":
        return self.terms.get(tuple(exps), _ZERO)

    def m_adic_order(self) -> int | float:
        """Total degree of the lowest nonzero term; infinity for the zero jet."""
        if not self.terms:
            return math.inf
        return min(sum(e) for e in self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, "Q"]]:
        for e in sorted_monomials(self.terms):
            yield e, self.terms[e]

    # comparison

    def _check_same_n(self, other: "Jet") -> None:
        if self.n != other.n:
            raise DimensionMismatch(
                f"jets live in different rings ({self.n} vs {other.n} variables)"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Jet):
            return NotImplemented
        self._check_same_n(other)
        if self.order != other.order:
            raise OrderMismatch(
                f"cannot compare jets of orders {self.order} and {other.order}; "
                "use equal_at(other, k)"
            )
        return self.terms == other.terms

    def equal_at(self, other: "Jet", k: int) -> bool:
        """Whether both jets agree on all terms of total degree <= k."""
        self._check_same_n(other)
        if k < 0 or k > min(self.order, other.order):
            raise OrderMismatch(
                f"order {k} not within the shared precision "
                f"(0..{min(self.order, other.order)})"
            )
        return _clip_terms(self.terms, k) == _clip_terms(other.terms, k)

    # arithmetic

    def truncate(self, k: int) -> "Jet":
        if k > self.order:
            raise OrderMismatch(f"cannot raise order {self.order} to {k}")
        if k < 0:
            raise OrderMismatch(f"cannot truncate to negative order {k}")
        if k == self.order:
            return self
        return Jet._raw(self.n, k, _clip_terms(self.terms, k))

    def _coerce(self, value) -> "Jet | None":
        if isinstance(value, Jet):
            self._check_same_n(value)
            return value
        try:
            c = as_rational(value)
        except TypeError:
            return None
        return Jet.constant(self.n, self.order, c)

    def __add__(self, other) -> "Jet":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        k = min(self.order, o.order)
        return Jet._raw(
            self.n, k, _add_terms(_clip_terms(self.terms, k), _clip_terms(o.terms, k))
        )

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet._raw(self.n, self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Jet":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other) -> "Jet":
        return (-self).__add__(other)

    def __mul__(self, other) -> "Jet":
        if isinstance(other, Jet):
            self._check_same_n(other)
            k = min(self.order, other.order)
            return Jet._raw(self.n, k, _mul_terms(self.terms, other.terms, k))
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return Jet._raw(self.n, self.order, _scale_terms(self.terms, c))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Jet":
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"jet powers take a non-negative int exponent, got {k!r}")
        out = Jet.constant(self.n, self.order, 1)
        for _ in range(k):
            out = out * self
        return out

    def partial_derivative(self, i: int) -> "Jet":
        """d/dx_i (1-based); the result is exact only to order - 1."""
        if not 1 <= i <= self.n:
            raise IndexError(f"variable index {i} out of range 1..{self.n}")
        if self.order < 1:
            raise PrecisionExhausted("cannot differentiate a jet of order 0")
        return Jet._raw(self.n, self.order - 1, _derive_terms(self.terms, i - 1))

    def substitute(self, images: Sequence["Jet"]) -> "Jet":
        """Evaluate this series at ``images``, one jet per variable.

        Every image must have zero constant term; substitution is only
        defined along the adic topology.  All images must live in the same
        ring as this jet.
        """
        if len(images) != self.n:
            raise DimensionMismatch(
                f"expected {self.n} substitution images, got {len(images)}"
            )
        cap = self.order
        for g in images:
            self._check_same_n(g)
            if g.constant_term:
                raise NotContinuous(
                    "substitution image has nonzero constant term "
                    f"{g.constant_term}; images must vanish at the origin"
                )
            cap = min(cap, g.order)
        raw = _subst_terms(self.terms, [_clip_terms(g.terms, cap) for g in images], cap, self.n)
        return Jet._raw(self.n, cap, raw)

    def invert_unit(self) -> "Jet":
        """Multiplicative inverse, defined when the constant term is nonzero.

        Writes the jet as c*(1 - u) with u of positive adic order and sums
        the geometric series in u, which terminates at the truncation order.
        """
        c = self.constant_term
        if not c:
            raise NotAUnit("jet has zero constant term and is not invertible")
        cinv = _ONE / c
        u = _scale_terms({e: v for e, v in self.terms.items() if sum(e) > 0}, -cinv)
        total = {(0,) * self.n: _ONE}
        power = total
        for _ in range(self.order):
            power = _mul_terms(power, u, self.order)
            if not power:
                break
            total = _add_terms(total, power)
        return Jet._raw(self.n, self.order, _scale_terms(total, cinv))

    # serialization

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "order": self.order,
            "terms": [
                {
                    "exp": list(e),
                    "num": str(int(self.terms[e].numerator)),
                    "den": str(int(self.terms[e].denominator)),
                }
                for e in sorted_monomials(self.terms)
            ],
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "Jet":
        try:
            n = obj["n"]
            order = obj["order"]
            raw = obj["terms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"jet object needs n/order/terms fields: {exc}") from exc
        terms: dict[Monomial, Q] = {}
        for item in raw:
            e = tuple(item["exp"])
            num = int(item["num"])
            den = int(item["den"])
            if den == 0:
                raise ValueError("zero denominator in jet term")
            c = Q(num) / Q(den)
            if e in terms:
                terms[e] = terms[e] + c
            else:
                terms[e] = c
        return cls(n, order, terms)

    # text form

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for e in sorted_monomials(self.terms):
            c = self.terms[e]
            neg = c < 0
            mag = -c if neg else c
            factors = [
                f"x{i + 1}" + (f"^{p}" if p > 1 else "")
                for i, p in enumerate(e)
                if p
            ]
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"<Jet n={self.n} order={self.order}: {self}>"


def _det_rows(rows: list[list[Jet]], n: int, order: int) -> Jet:
    m = len(rows)
    if m == 1:
        return rows[0][0]
    if m == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Jet.zero(n, order)
    for j in range(m):
        head = rows[0][j]
        if head.is_zero:
            continue
        minor = [[row[k] for k in range(m) if k != j] for row in rows[1:]]
        term = head * _det_rows(minor, n, order)
        total = total + (term if j % 2 == 0 else -term)
    return total


# -- matrices of jets ----------------------------------------------------------


@dataclass(frozen=True, eq=False, repr=False)
class JetMatrix:
    """A square matrix of jets sharing one ring and one truncation order."""

    rows: tuple[tuple[Jet, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(row) for row in self.rows)
        m = len(rows)
        if m == 0 or any(len(row) != m for row in rows):
            raise ValueError("jet matrices must be square and non-empty")
        first = rows[0][0]
        for row in rows:
            for entry in row:
                if not isinstance(entry, Jet):
                    raise TypeError(f"matrix entries must be jets, got {entry!r}")
                if entry.n != m:
                    raise DimensionMismatch(
                        f"{m}x{m} matrix entries must live in {m} variables, "
                        f"got {entry.n}"
                    )
                if entry.order != first.order:
                    raise OrderMismatch("matrix entries must share one truncation order")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def order(self) -> int:
        return self.rows[0][0].order

    @classmethod
    def identity(cls, n: int, order: int) -> "JetMatrix":
        one = Jet.constant(n, order, 1)
        zero = Jet.zero(n, order)
        return cls(tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)
        ))

    @classmethod
    def constant(cls, values: Sequence[Sequence[RationalLike]], order: int) -> "JetMatrix":
        n = len(values)
        return cls(tuple(
            tuple(Jet.constant(n, order, v) for v in row) for row in values
        ))

    def map_entries(self, fn) -> "JetMatrix":
        return JetMatrix(tuple(tuple(fn(e) for e in row) for row in self.rows))

    def scale(self, c: RationalLike) -> "JetMatrix":
        return self.map_entries(lambda e: e * c)

    def __add__(self, other: "JetMatrix") -> "JetMatrix":
        self._check_compatible(other)
        return JetMatrix(tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        ))

    def __sub__(self, other: "JetMatrix") -> "JetMatrix":
        self._check_compatible(other)
        return JetMatrix(tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        ))

    def __matmul__(self, other: "JetMatrix") -> "JetMatrix":
        self._check_compatible(other)
        n = self.n
        cap = min(self.order, other.order)
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc: dict = {}
                for a, b in zip(row, col):
                    if a.terms and b.terms:
                        acc = _add_terms(acc, _mul_terms(a.terms, b.terms, cap))
                out_row.append(Jet._raw(n, cap, acc))
            out.append(tuple(out_row))
        return JetMatrix(tuple(out))

    def _check_compatible(self, other: "JetMatrix") -> None:
        if not isinstance(other, JetMatrix):
            raise TypeError(f"expected a JetMatrix, got {other!r}")
        if self.n != other.n:
            raise DimensionMismatch(f"matrix sizes differ ({self.n} vs {other.n})")

    def det(self) -> Jet:
        """Determinant by cofactor expansion; fine for the small n used here."""
        return _det_rows([list(row) for row in self.rows], self.n, self.order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JetMatrix):
            return NotImplemented
        self._check_compatible(other)
        return all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def equal_at(self, other: "JetMatrix", k: int) -> bool:
        self._check_compatible(other)
        return all(
            a.equal_at(b, k)
            for ra, rb in zip(self.rows, other.rows)
            for a, b in zip(ra, rb)
        )

    def __str__(self) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(str(e) for e in row) + "]" for row in self.rows
        ) + "]"

    def __repr__(self) -> str:
        return f"<JetMatrix {self.n}x{self.n} order={self.order}: {self}>"
