"""Exact scalar, vector and affine-map primitives.

Everything is built on ``fractions.Fraction``, which already keeps values in
canonical form (lowest terms, positive denominator) after every operation.
Vectors and matrices are immutable tuples of fractions; all arithmetic here is
exact, there is no floating point anywhere in the core.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DimensionMismatch, InvariantViolation

Rational = Fraction
RationalLike = Union[Fraction, int, str]


def rat(value: RationalLike) -> Fraction:
    """Coerce ints and 'p/q' strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rat_str(value: Fraction) -> str:
    """Serialize a rational as 'p' or 'p/q' with q > 0 in lowest terms."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Vector:
    """Point or normal with exact rational coordinates."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable[RationalLike]):
        object.__setattr__(self, "coords", tuple(rat(c) for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __add__(self, other: "Vector") -> "Vector":
        _same_dim(self, other)
        return Vector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Vector") -> "Vector":
        _same_dim(self, other)
        return Vector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Vector":
        return Vector(-a for a in self.coords)

    def scale(self, factor: RationalLike) -> "Vector":
        f = rat(factor)
        return Vector(f * a for a in self.coords)

    def dot(self, other: "Vector") -> Fraction:
        _same_dim(self, other)
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def __repr__(self) -> str:
        return "Vector(" + ", ".join(rat_str(c) for c in self.coords) + ")"


def zero_vector(dim: int) -> Vector:
    return Vector([Fraction(0)] * dim)


def unit_vector(dim: int, i: int) -> Vector:
    coords = [Fraction(0)] * dim
    coords[i] = Fraction(1)
    return Vector(coords)


def _same_dim(a: Vector, b: Vector) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"vector dims {a.dim} and {b.dim} differ")


Matrix = tuple[tuple[Fraction, ...], ...]


def matrix(rows: Iterable[Iterable[RationalLike]]) -> Matrix:
    out = tuple(tuple(rat(x) for x in row) for row in rows)
    if out and any(len(row) != len(out[0]) for row in out):
        raise DimensionMismatch("ragged matrix rows")
    return out


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def mat_vec(m: Matrix, v: Vector) -> Vector:
    if m and len(m[0]) != v.dim:
        raise DimensionMismatch(f"matrix has {len(m[0])} columns, vector dim {v.dim}")
    return Vector(sum((r * c for r, c in zip(row, v.coords)), Fraction(0)) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch("inner matrix dimensions differ")
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(cols))
        for i in range(len(a))
    )


def mat_rank(m: Sequence[Sequence[Fraction]]) -> int:
    """Rank by exact Gaussian elimination."""
    rows = [list(r) for r in m]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def mat_inverse(m: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan; raises on singular input."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionMismatch("inverse needs a square matrix")
    aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise InvariantViolation("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def solve_linear_system(m: Matrix, rhs: Sequence[Vector]) -> list[Vector]:
    """Solve m @ x_k = rhs_k for each right-hand side, m square invertible."""
    inv = mat_inverse(m)
    return [mat_vec(inv, v) for v in rhs]


@dataclass(frozen=True)
class AffineMap:
    """x -> A x + b with exact rational entries.

    ``linear`` has ``dim_out`` rows of ``dim_in`` entries each; ``offset`` has
    ``dim_out`` coordinates.
    """

    linear: Matrix
    offset: Vector

    def __init__(self, linear: Iterable[Iterable[RationalLike]], offset: Iterable[RationalLike]):
        lin = matrix(linear)
        off = offset if isinstance(offset, Vector) else Vector(offset)
        if len(lin) != off.dim:
            raise DimensionMismatch(f"{len(lin)} matrix rows vs offset dim {off.dim}")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "offset", off)

    @property
    def dim_in(self) -> int:
        return len(self.linear[0]) if self.linear else 0

    @property
    def dim_out(self) -> int:
        return self.offset.dim

    def __call__(self, x: Vector) -> Vector:
        if x.dim != self.dim_in:
            raise DimensionMismatch(f"map expects dim {self.dim_in}, got {x.dim}")
        return mat_vec(self.linear, x) + self.offset

    def row(self, i: int) -> "AffineMap":
        """The i-th scalar coordinate as a 1-row affine map."""
        return AffineMap([self.linear[i]], [self.offset[i]])

    def is_linear(self) -> bool:
        return self.offset.is_zero()


def affine_identity(dim: int) -> AffineMap:
    return AffineMap(identity_matrix(dim), zero_vector(dim))


def affine_constant(value: Vector, dim_in: int) -> AffineMap:
    return AffineMap(tuple(tuple(Fraction(0) for _ in range(dim_in)) for _ in range(value.dim)), value)


def affine_zero(dim_in: int, dim_out: int) -> AffineMap:
    return affine_constant(zero_vector(dim_out), dim_in)


def affine_add(a: AffineMap, b: AffineMap) -> AffineMap:
    if a.dim_in != b.dim_in or a.dim_out != b.dim_out:
        raise DimensionMismatch("affine maps have different shapes")
    lin = tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.linear, b.linear))
    return AffineMap(lin, a.offset + b.offset)


def affine_scale(a: AffineMap, factor: RationalLike) -> AffineMap:
    f = rat(factor)
    return AffineMap(tuple(tuple(f * x for x in row) for row in a.linear), a.offset.scale(f))


def affine_sub(a: AffineMap, b: AffineMap) -> AffineMap:
    return affine_add(a, affine_scale(b, -1))


def affine_compose(outer: AffineMap, inner: AffineMap) -> AffineMap:
    """x -> outer(inner(x))."""
    if outer.dim_in != inner.dim_out:
        raise DimensionMismatch(
            f"outer expects dim {outer.dim_in}, inner produces {inner.dim_out}"
        )
    return AffineMap(mat_mul(outer.linear, inner.linear), mat_vec(outer.linear, inner.offset) + outer.offset)


def affine_stack(rows: Sequence[AffineMap]) -> AffineMap:
    """Stack scalar (or small) maps into one map; outputs are concatenated."""
    if not rows:
        raise InvariantViolation("cannot stack zero maps")
    dim_in = rows[0].dim_in
    if any(r.dim_in != dim_in for r in rows):
        raise DimensionMismatch("stacked maps must share dim_in")
    lin: list[tuple[Fraction, ...]] = []
    off: list[Fraction] = []
    for r in rows:
        lin.extend(r.linear)
        off.extend(r.offset.coords)
    return AffineMap(tuple(lin), Vector(off))


@dataclass(frozen=True)
class Halfspace:
    """Closed halfspace {x : normal . x <= bound}.

    A zero normal is permitted and encodes a trivial constraint: the whole
    space when bound >= 0 and the empty set when bound < 0. Such rows arise
    naturally from preimages and piece comparisons and every consumer here
    treats them by that convention.
    """

    normal: Vector
    bound: Fraction

    def __init__(self, normal: Iterable[RationalLike], bound: RationalLike):
        n = normal if isinstance(normal, Vector) else Vector(normal)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "bound", rat(bound))

    @property
    def dim(self) -> int:
        return self.normal.dim

    def contains(self, x: Vector) -> bool:
        return self.normal.dot(x) <= self.bound

    def flipped(self) -> "Halfspace":
        """The opposite closed side {x : normal . x >= bound}."""
        return Halfspace(-self.normal, -self.bound)

    def is_trivial(self) -> bool:
        return self.normal.is_zero() and self.bound >= 0

    def is_infeasible(self) -> bool:
        return self.normal.is_zero() and self.bound < 0


def halfspace_preimage(h: Halfspace, f: AffineMap) -> Halfspace:
    """{x : h contains f(x)} as a halfspace over the domain of f."""
    if h.dim != f.dim_out:
        raise DimensionMismatch("halfspace and map codomain differ")
    normal = Vector(
        sum((h.normal[i] * f.linear[i][j] for i in range(f.dim_out)), Fraction(0))
        for j in range(f.dim_in)
    )
    return Halfspace(normal, h.bound - h.normal.dot(f.offset))


@dataclass(frozen=True)
class OrderingCone:
    """Simplicial cone spanned by a basis, inducing a vector order.

    The cone is the set of nonnegative combinations of the generators, which
    must form a basis of the space. Membership, the induced order and the
    coordinatewise max/min all act through the dual functionals: the rows of
    the inverse of the generator matrix.
    """

    generators: tuple[Vector, ...]
    duals: tuple[Vector, ...]

    def __init__(self, generators: Iterable[Iterable[RationalLike]]):
        gens = tuple(g if isinstance(g, Vector) else Vector(g) for g in generators)
        n = len(gens)
        if n == 0 or any(g.dim != n for g in gens):
            raise DimensionMismatch("cone generators must be n vectors of dimension n")
        columns = matrix([[gens[k][r] for k in range(n)] for r in range(n)])
        duals = tuple(Vector(row) for row in mat_inverse(columns))
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "duals", duals)

    @property
    def dim(self) -> int:
        return len(self.generators)

    def is_standard(self) -> bool:
        return all(g == unit_vector(self.dim, i) for i, g in enumerate(self.generators))

    def coordinates(self, y: Vector) -> Vector:
        """y expressed in the generator basis."""
        return Vector([d.dot(y) for d in self.duals])

    def from_coordinates(self, t: Vector) -> Vector:
        total = zero_vector(self.dim)
        for k, g in enumerate(self.generators):
            total = total + g.scale(t[k])
        return total

    def contains(self, y: Vector) -> bool:
        return all(c >= 0 for c in self.coordinates(y))

    def leq(self, a: Vector, b: Vector) -> bool:
        """a below b in the order whose positive cone is this cone."""
        return self.contains(b - a)

    def sup_point(self, a: Vector, b: Vector) -> Vector:
        ta, tb = self.coordinates(a), self.coordinates(b)
        return self.from_coordinates(Vector([max(x, y) for x, y in zip(ta, tb)]))

    def inf_point(self, a: Vector, b: Vector) -> Vector:
        ta, tb = self.coordinates(a), self.coordinates(b)
        return self.from_coordinates(Vector([min(x, y) for x, y in zip(ta, tb)]))

    def generator_matrix(self) -> Matrix:
        """Matrix whose columns are the generators."""
        n = self.dim
        return matrix([[self.generators[k][r] for k in range(n)] for r in range(n)])


def standard_cone(dim: int) -> OrderingCone:
    """The nonnegative-orthant order: coordinatewise comparison."""
    return OrderingCone([unit_vector(dim, i) for i in range(dim)])
