"""Continuous formal maps and their Jacobian calculus.

A FormalMap sigma stores the images sigma(x1)..sigma(xn) as jets of one
common order N.  Every image must vanish at the origin: only then is
substitution along sigma well defined on truncated series.  The map is an
automorphism exactly when its linear part (an n x n rational matrix) is
invertible.

Conventions used throughout, chosen once and shared by every identity in
the verification suite:

* ``apply(sigma, f)`` is f evaluated at the images, so jets pull back
  contravariantly along the map of coordinates.
* ``compose(sigma, tau)`` is defined by
  ``apply(compose(sigma, tau), f) == apply(sigma, apply(tau, f))``,
  which makes its images ``apply(sigma, tau_image)``.
* The Jacobian matrix has entries ``J[i][j] = d(sigma(x_j)) / d(x_i)``:
  row index differentiates, column index picks the image.  Its entries are
  jets of order N - 1, one derivative below the map itself.

Precision: compose keeps min of the two orders; invert keeps the order;
jacobian / jacobian_det drop one order; matrix_inverse keeps the matrix
order; exp_flow returns the field's order (its correction terms have
strictly increasing adic order, so plain truncated arithmetic at the
target order is exact there).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Sequence

from . import linalg
from .errors import (
    DimensionMismatch,
    NotContinuous,
    NotNilpotent,
    OrderMismatch,
    PrecisionExhausted,
    SingularMatrix,
)
from .jets import (
    Jet,
    JetMatrix,
    Monomial,
    _add_terms,
    _derive_terms,
    _mul_terms,
    _scale_terms,
)
from .rationals import Q, RationalLike, as_rational

if TYPE_CHECKING:  # pragma: no cover
    from .fields import Derivation

LinearPart = list[list["Q"]]


@dataclass(frozen=True, eq=False, repr=False)
class FormalMap:
    """A continuous endomorphism of the truncated series ring."""

    n: int
    order: int
    images: tuple[Jet, ...]

    def __post_init__(self) -> None:
        images = tuple(self.images)
        if not isinstance(self.order, int) or self.order < 1:
            raise ValueError(f"maps need truncation order >= 1, got {self.order!r}")
        if len(images) != self.n:
            raise DimensionMismatch(
                f"expected {self.n} images, got {len(images)}"
            )
        for k, img in enumerate(images, start=1):
            if not isinstance(img, Jet):
                raise TypeError(f"image of x{k} must be a Jet, got {img!r}")
            if img.n != self.n:
                raise DimensionMismatch(
                    f"image of x{k} lives in {img.n} variables, expected {self.n}"
                )
            if img.order != self.order:
                raise OrderMismatch(
                    f"image of x{k} has order {img.order}, expected {self.order}"
                )
            if img.constant_term:
                raise NotContinuous(
                    f"image of x{k} has nonzero constant term {img.constant_term}"
                )
        object.__setattr__(self, "images", images)

    # algebra

    def apply(self, f: Jet) -> Jet:
        """Pull back the jet f along this map: f evaluated at the images."""
        if f.n != self.n:
            raise DimensionMismatch(
                f"jet in {f.n} variables cannot be pulled back along a map on {self.n}"
            )
        return f.substitute(self.images)

    def apply_matrix(self, m: JetMatrix) -> JetMatrix:
        return m.map_entries(self.apply)

    def compose(self, other: "FormalMap") -> "FormalMap":
        """The map with apply(result, f) == apply(self, apply(other, f))."""
        if self.n != other.n:
            raise DimensionMismatch(
                f"cannot compose maps on {self.n} and {other.n} variables"
            )
        k = min(self.order, other.order)
        images = tuple(self.apply(img).truncate(k) for img in other.images)
        return FormalMap(self.n, k, images)

    def linear_part(self) -> LinearPart:
        """The matrix A with image_i = sum_j A[i][j] x_j + higher order."""
        out = []
        for img in self.images:
            row = []
            for j in range(self.n):
                exps = tuple(1 if k == j else 0 for k in range(self.n))
                row.append(img.coefficient(exps))
            out.append(row)
        return out

    @property
    def is_automorphism(self) -> bool:
        return bool(linalg.det(self.linear_part()))

    def jacobian_matrix(self) -> JetMatrix:
        """Entries J[i][j] = d(image_j)/d(x_i), exact to order - 1."""
        cols = [
            [img.partial_derivative(i + 1) for img in self.images]
            for i in range(self.n)
        ]
        return JetMatrix(tuple(tuple(col) for col in cols))

    def jacobian_det(self) -> Jet:
        return self.jacobian_matrix().det()

    def is_constant_jacobian(self) -> bool:
        """Whether the Jacobian determinant is a (nonzero) constant.

        Needs order >= 2: the determinant is only known to order - 1, and
        a verdict requires seeing at least the degree-1 terms.
        """
        if self.order < 2:
            raise PrecisionExhausted(
                "constant-Jacobian verdict needs a map of order >= 2"
            )
        jd = self.jacobian_det()
        if any(sum(e) > 0 for e in jd.terms):
            return False
        return bool(jd.constant_term)

    def invert(self) -> "FormalMap":
        """The two-sided compositional inverse.

        Splits the images into linear part plus higher terms, sigma = A x + h,
        and solves w = A^-1 (x - h(w)) by fixed-point iteration.  Each round
        gains at least one adic order, so ``order`` rounds are enough.
        """
        try:
            ainv = linalg.inverse(self.linear_part())
        except SingularMatrix:
            raise SingularMatrix(
                "map has a singular linear part, so no formal inverse exists"
            ) from None
        n, cap = self.n, self.order
        xs = [Jet.variable(n, cap, i + 1) for i in range(n)]
        a = self.linear_part()
        higher = [
            img - sum((a[i][j] * xs[j] for j in range(n)), Jet.zero(n, cap))
            for i, img in enumerate(self.images)
        ]
        def pull(back: list[Jet]) -> list[Jet]:
            hw = [h.substitute(back) for h in higher]
            return [
                sum((ainv[i][j] * (xs[j] - hw[j]) for j in range(n)), Jet.zero(n, cap))
                for i in range(n)
            ]
        w = [
            sum((ainv[i][j] * xs[j] for j in range(n)), Jet.zero(n, cap))
            for i in range(n)
        ]
        for _ in range(cap):
            nxt = pull(w)
            if nxt == w:
                break
            w = nxt
        return FormalMap(n, cap, tuple(w))

    # comparison and serialization

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalMap):
            return NotImplemented
        if self.n != other.n:
            raise DimensionMismatch(
                f"maps on {self.n} and {other.n} variables are incomparable"
            )
        if self.order != other.order:
            raise OrderMismatch(
                f"cannot compare maps of orders {self.order} and {other.order}"
            )
        return self.images == other.images

    def equal_at(self, other: "FormalMap", k: int) -> bool:
        if self.n != other.n:
            raise DimensionMismatch(
                f"maps on {self.n} and {other.n} variables are incomparable"
            )
        return all(a.equal_at(b, k) for a, b in zip(self.images, other.images))

    def truncate(self, k: int) -> "FormalMap":
        if k == self.order:
            return self
        return FormalMap(self.n, k, tuple(img.truncate(k) for img in self.images))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "order": self.order,
            "images": [img.to_dict() for img in self.images],
        }

    @classmethod
    def from_dict(cls, obj) -> "FormalMap":
        return cls(obj["n"], obj["order"], tuple(Jet.from_dict(j) for j in obj["images"]))

    def __str__(self) -> str:
        return "; ".join(f"x{i + 1} -> {img}" for i, img in enumerate(self.images))

    def __repr__(self) -> str:
        return f"<FormalMap n={self.n} order={self.order}: {self}>"


# -- constructors ---------------------------------------------------------------


def identity_map(n: int, order: int) -> FormalMap:
    return FormalMap(n, order, tuple(Jet.variable(n, order, i + 1) for i in range(n)))


def linear_map(matrix: Sequence[Sequence[RationalLike]], order: int) -> FormalMap:
    """The map x_i -> sum_j matrix[i][j] x_j (not necessarily invertible)."""
    n = len(matrix)
    images = []
    for row in matrix:
        if len(row) != n:
            raise DimensionMismatch("linear part must be a square matrix")
        terms: dict[Monomial, Q] = {}
        for j, v in enumerate(row):
            c = as_rational(v)
            if c:
                terms[tuple(1 if k == j else 0 for k in range(n))] = c
        images.append(Jet(n, order, terms))
    return FormalMap(n, order, tuple(images))


def shear(n: int, order: int, i: int, displacement: Jet) -> FormalMap:
    """The map sending x_i to x_i + displacement and fixing the other variables.

    The displacement must have adic order >= 2 and not involve x_i; such a
    map has Jacobian determinant exactly 1.
    """
    if not 1 <= i <= n:
        raise IndexError(f"variable index {i} out of range 1..{n}")
    if displacement.n != n or displacement.order != order:
        raise DimensionMismatch("displacement must share the map's ring and order")
    if displacement.m_adic_order() < 2:
        raise ValueError("shear displacement must have adic order >= 2")
    if any(e[i - 1] for e in displacement.terms):
        raise ValueError(f"shear displacement must not involve x{i}")
    images = list(identity_map(n, order).images)
    images[i - 1] = images[i - 1] + displacement
    return FormalMap(n, order, tuple(images))


# -- matrix inversion over jets ---------------------------------------------------


def matrix_inverse(m: JetMatrix) -> JetMatrix:
    """Inverse of a jet matrix whose constant term is invertible.

    Newton iteration X <- X(2I - MX) starting from the inverse of the
    constant matrix; the residual's adic order doubles each round, so
    bit_length(order) rounds reach the truncation order.
    """
    const = [[entry.constant_term for entry in row] for row in m.rows]
    seed = linalg.inverse(const)
    x = JetMatrix.constant(seed, m.order)
    two_i = JetMatrix.identity(m.n, m.order).scale(2)
    for _ in range(m.order.bit_length()):
        x = x @ (two_i - (m @ x))
    return x


# -- flows -------------------------------------------------------------------------


def _flow_images(n: int, order: int, coeffs: Sequence[Jet]) -> list[Jet]:
    # Raw truncated arithmetic at the full target order.  Each Lie step
    # multiplies by a coefficient of adic order >= 2 and differentiates
    # once, so the running term gains at least one adic order per round
    # and dropped terms all lie beyond the truncation order.
    coeff_terms = [dict(c.terms) for c in coeffs]
    images = []
    for i in range(n):
        unit = tuple(1 if k == i else 0 for k in range(n))
        acc: dict = {unit: Q(1)}
        term: dict = dict(acc)
        k = 0
        while term:
            k += 1
            nxt: dict = {}
            for j in range(n):
                if not coeff_terms[j]:
                    continue
                d = _derive_terms(term, j)
                if d:
                    nxt = _add_terms(nxt, _mul_terms(coeff_terms[j], d, order))
            term = _scale_terms(nxt, Q(1, k))
            acc = _add_terms(acc, term)
        images.append(Jet(n, order, acc))
    return images


def exp_flow(field: "Derivation") -> FormalMap:
    """The time-1 flow of a field whose coefficients have adic order >= 2.

    Images are x_i + field(x_i) + field(field(x_i))/2! + ...; the adic
    order of the k-th term grows with k, so the sum terminates at the
    truncation order and the result is exact there.
    """
    for k, c in enumerate(field.coefficients, start=1):
        if c.m_adic_order() < 2:
            raise NotNilpotent(
                f"flow coefficient {k} has adic order {c.m_adic_order()}; "
                "exponentiation needs adic order >= 2"
            )
    images = _flow_images(field.n, field.order, field.coefficients)
    return FormalMap(field.n, field.order, tuple(images))


# -- seeded random generation -------------------------------------------------------


@dataclass(frozen=True)
class MapGenParams:
    """Knobs for the seeded map samplers.

    ``shears`` and ``flows`` only take effect for n >= 2 and order >= 2;
    in one variable the constant-Jacobian maps are exactly the linear
    ones, so the samplers degenerate there by design.
    """

    shears: int = 2
    flows: int = 1
    tail_terms: int = 1
    numer_bound: int = 2
    denominators: tuple[int, ...] = (1, 1, 2)
    identity_linear: bool = False


DEFAULT_MAP_PARAMS = MapGenParams()


def _as_rng(seed: "int | random.Random") -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def _rand_rational(rng: random.Random, params: MapGenParams, nonzero: bool = False) -> "Q":
    while True:
        num = rng.randint(-params.numer_bound, params.numer_bound)
        if num == 0 and nonzero:
            continue
        return Q(num, rng.choice(params.denominators))


def _rand_monomial(
    rng: random.Random, n: int, lo: int, hi: int, avoid: int | None = None
) -> Monomial | None:
    """A random exponent tuple of total degree in [lo, hi], or None if impossible.

    ``avoid`` is a 0-based variable index that must not appear.
    """
    allowed = [j for j in range(n) if j != avoid]
    if not allowed or hi < lo:
        return None
    degree = rng.randint(lo, hi)
    exps = [0] * n
    for _ in range(degree):
        exps[rng.choice(allowed)] += 1
    return tuple(exps)


def _rand_invertible(rng: random.Random, n: int, params: MapGenParams) -> LinearPart:
    if params.identity_linear:
        return linalg.identity(n)
    for _ in range(200):
        m = [[_rand_rational(rng, params) for _ in range(n)] for _ in range(n)]
        if linalg.det(m):
            return m
    # Vanishingly unlikely; fall back to a unit upper-triangular matrix.
    m = linalg.identity(n)
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = _rand_rational(rng, params)
    return m


def random_shear(
    n: int, order: int, seed: "int | random.Random",
    params: MapGenParams = DEFAULT_MAP_PARAMS, target: int | None = None,
) -> FormalMap:
    """A random shear; identity when n or the order leaves no room for one."""
    rng = _as_rng(seed)
    if n < 2 or order < 2:
        return identity_map(n, order)
    i = target if target is not None else rng.randint(1, n)
    terms: dict[Monomial, Q] = {}
    for _ in range(rng.randint(1, 2)):
        exps = _rand_monomial(rng, n, 2, order, avoid=i - 1)
        if exps is not None:
            terms = _add_terms(terms, {exps: _rand_rational(rng, params, nonzero=True)})
    return shear(n, order, i, Jet(n, order, terms))


def _divergence_free_coeffs(
    rng: random.Random, n: int, order: int, params: MapGenParams
) -> list[dict]:
    """Coefficient term dicts of a random divergence-free field, adic order >= 2.

    Two exact constructions, mixed at random: a monomial field m * d_i with
    m independent of x_i, and a Hamiltonian pair (df/dx_j) d_i - (df/dx_i) d_j
    with f of adic order >= 3.  Sums of these stay divergence free.
    """
    coeffs: list[dict] = [{} for _ in range(n)]
    if n < 2 or order < 2:
        return coeffs
    for _ in range(rng.randint(1, 2)):
        if order >= 3 and rng.random() < 0.5:
            i, j = rng.sample(range(n), 2)
            f_exps = _rand_monomial(rng, n, 3, order + 1)
            f = {f_exps: _rand_rational(rng, params, nonzero=True)}
            di = _derive_terms(f, i)
            dj = _derive_terms(f, j)
            coeffs[i] = _add_terms(coeffs[i], {e: c for e, c in dj.items() if sum(e) <= order})
            coeffs[j] = _add_terms(coeffs[j], {e: -c for e, c in di.items() if sum(e) <= order})
        else:
            i = rng.randrange(n)
            exps = _rand_monomial(rng, n, 2, order, avoid=i)
            if exps is not None:
                coeffs[i] = _add_terms(coeffs[i], {exps: _rand_rational(rng, params, nonzero=True)})
    return coeffs


def random_const_jacobian(
    n: int, order: int, seed: "int | random.Random",
    params: MapGenParams = DEFAULT_MAP_PARAMS,
) -> FormalMap:
    """A seeded random map with constant Jacobian determinant.

    Composes an invertible linear map with ``params.shears`` shears and the
    flows of ``params.flows`` divergence-free fields.  For n = 1 only the
    linear stage exists and the result is x -> c x.
    """
    rng = _as_rng(seed)
    result = linear_map(_rand_invertible(rng, n, params), order)
    if n >= 2 and order >= 2:
        for k in range(params.shears):
            s = random_shear(n, order, rng, params, target=(k % n) + 1)
            result = result.compose(s)
        for _ in range(params.flows):
            coeffs = _divergence_free_coeffs(rng, n, order, params)
            images = _flow_images(n, order, [Jet(n, order, t) for t in coeffs])
            result = result.compose(FormalMap(n, order, tuple(images)))
    return result


def random_automorphism(
    n: int, order: int, seed: "int | random.Random",
    params: MapGenParams = replace(DEFAULT_MAP_PARAMS, flows=0, tail_terms=2),
) -> FormalMap:
    """A seeded random automorphism with generic higher-order terms.

    Starts from the constant-Jacobian sampler (linear part plus shears and
    optional flows) and then adds random tail terms of adic order >= 2 to
    each image, which preserves the invertible linear part.
    """
    rng = _as_rng(seed)
    base = random_const_jacobian(n, order, rng, params)
    images = list(base.images)
    if order >= 2:
        for i in range(n):
            extra: dict[Monomial, Q] = {}
            for _ in range(params.tail_terms):
                exps = _rand_monomial(rng, n, 2, order)
                if exps is not None:
                    extra = _add_terms(extra, {exps: _rand_rational(rng, params)})
            if extra:
                images[i] = images[i] + Jet(n, order, extra)
    return FormalMap(n, order, tuple(images))


# -- functional aliases mirroring the method API -------------------------------------


def apply(sigma: FormalMap, f: Jet) -> Jet:
    return sigma.apply(f)


def compose(sigma: FormalMap, tau: FormalMap) -> FormalMap:
    return sigma.compose(tau)


def is_automorphism(sigma: FormalMap) -> bool:
    return sigma.is_automorphism


def jacobian_matrix(sigma: FormalMap) -> JetMatrix:
    return sigma.jacobian_matrix()


def jacobian_det(sigma: FormalMap) -> Jet:
    return sigma.jacobian_det()


def is_constant_jacobian(sigma: FormalMap) -> bool:
    return sigma.is_constant_jacobian()


def invert(sigma: FormalMap) -> FormalMap:
    return sigma.invert()
