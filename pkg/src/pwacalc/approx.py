"""Piecewise affine interpolation of continuous maps on a gridded box.

Each grid box is cut into d! simplices, one per ordering of the local
coordinates, and every simplex carries the unique affine map matching the
sampled values at its d+1 vertices.  Composing with a clamp onto the box
extends the interpolant to the whole space, so the result is an ordinary
covering-form map.  Errors are measured from below by exact evaluation at
grid vertices and random rational points inside every simplex.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Iterator, Optional, Sequence

from .errors import DimensionMismatch, InvariantViolation, OracleFailure
from .geometry import (
    AffineMap,
    Halfspace,
    Vector,
    affine_constant,
    affine_identity,
    matrix,
    solve_linear_system,
    unit_vector,
)
from .polyhedra import ConvexPolyhedron
from .pwa import PwaMap, affine_as_map, compose, eval_map, lattice_inf, lattice_sup


@dataclass(frozen=True)
class BoxGrid:
    """Axis-aligned box subdivided into resolution[i] slabs along axis i."""

    lower: Vector
    upper: Vector
    resolution: tuple[int, ...]

    def __init__(self, lower, upper, resolution):
        lo = lower if isinstance(lower, Vector) else Vector(lower)
        hi = upper if isinstance(upper, Vector) else Vector(upper)
        if lo.dim != hi.dim:
            raise DimensionMismatch(f"corner dims {lo.dim} vs {hi.dim}")
        if lo.dim < 1:
            raise DimensionMismatch("box must have positive dimension")
        if any(a >= b for a, b in zip(lo, hi)):
            raise InvariantViolation("lower corner must be strictly below upper")
        if isinstance(resolution, int):
            res = (resolution,) * lo.dim
        else:
            res = tuple(int(r) for r in resolution)
        if len(res) != lo.dim:
            raise DimensionMismatch(f"{len(res)} resolutions for dim {lo.dim}")
        if any(r < 1 for r in res):
            raise InvariantViolation("resolution must be positive on every axis")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        object.__setattr__(self, "resolution", res)

    @property
    def dim(self) -> int:
        return self.lower.dim

    def step(self, axis: int) -> Fraction:
        return (self.upper[axis] - self.lower[axis]) / self.resolution[axis]

    def vertex(self, index: Sequence[int]) -> Vector:
        return Vector(
            self.lower[i] + self.step(i) * k for i, k in enumerate(index)
        )

    def vertices(self) -> Iterator[Vector]:
        for index in product(*(range(r + 1) for r in self.resolution)):
            yield self.vertex(index)

    def boxes(self) -> Iterator[tuple[int, ...]]:
        """Lower-corner index of every grid box."""
        yield from product(*(range(r) for r in self.resolution))


def _exact(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("bool is not a number")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a number")


@dataclass(frozen=True)
class FunctionOracle:
    """Evaluation procedure with declared dimensions.

    Outputs are taken exactly when the procedure returns rationals; with
    ``precision`` set, every output coordinate is rounded to the nearest
    multiple of 10^-precision first, so each sample is off by at most
    ``quantization_bound`` from what the procedure returned.
    """

    fn: Callable[[Vector], Sequence]
    dim_in: int
    dim_out: int
    precision: Optional[int] = None

    @property
    def quantization_bound(self) -> Fraction:
        if self.precision is None:
            return Fraction(0)
        return Fraction(1, 2 * 10**self.precision)

    def __call__(self, x: Vector) -> Vector:
        if x.dim != self.dim_in:
            raise DimensionMismatch(f"oracle takes dim {self.dim_in}, got {x.dim}")
        try:
            raw = list(self.fn(x))
            values = [_exact(v) for v in raw]
        except Exception as exc:
            raise OracleFailure(f"oracle failed at {x!r}: {exc}") from exc
        if len(values) != self.dim_out:
            raise OracleFailure(
                f"oracle returned {len(values)} coordinates, declared {self.dim_out}"
            )
        if self.precision is not None:
            scale = 10**self.precision
            values = [Fraction(round(v * scale), scale) for v in values]
        return Vector(values)


def _simplex_vertices(
    box: tuple[int, ...], order: tuple[int, ...]
) -> list[tuple[int, ...]]:
    """Vertex indices of the simplex walking the box edges in axis order."""
    chain = [box]
    for axis in order:
        prev = chain[-1]
        chain.append(prev[:axis] + (prev[axis] + 1,) + prev[axis + 1 :])
    return chain


def _simplex_cell(
    grid: BoxGrid, box: tuple[int, ...], order: tuple[int, ...]
) -> ConvexPolyhedron:
    # local coordinates u_i = (x_i - corner_i)/h_i; the simplex for an axis
    # order is 1 >= u_first >= ... >= u_last >= 0, written in x directly
    d = grid.dim
    corner = grid.vertex(box)
    h = [grid.step(i) for i in range(d)]
    rows = [Halfspace(unit_vector(d, order[0]), corner[order[0]] + h[order[0]])]
    for a, b in zip(order, order[1:]):
        normal = unit_vector(d, b).scale(1 / h[b]) - unit_vector(d, a).scale(1 / h[a])
        rows.append(Halfspace(normal, corner[b] / h[b] - corner[a] / h[a]))
    last = order[-1]
    rows.append(Halfspace(-unit_vector(d, last), -corner[last]))
    return ConvexPolyhedron(d, rows)


def _interpolant(points: Sequence[Vector], values: Sequence[Vector]) -> AffineMap:
    """The unique affine map through d+1 affinely independent samples."""
    d = points[0].dim
    m = matrix([list(p.coords) + [1] for p in points])
    dim_out = values[0].dim
    rhs = [Vector(v[k] for v in values) for k in range(dim_out)]
    sols = solve_linear_system(m, rhs)
    return AffineMap(
        matrix([s.coords[:d] for s in sols]), Vector(s.coords[d] for s in sols)
    )


def _clamp_map(grid: BoxGrid) -> PwaMap:
    """Coordinatewise median of lower, x, upper as a covering-form map."""
    ident = affine_as_map(affine_identity(grid.dim))
    low = affine_as_map(affine_constant(grid.lower, grid.dim))
    high = affine_as_map(affine_constant(grid.upper, grid.dim))
    return lattice_inf(lattice_sup(ident, low), high)


def interpolate(f: FunctionOracle, grid: BoxGrid) -> PwaMap:
    """Piecewise affine interpolation of f on the grid, clamped outside.

    The result agrees with f at every grid vertex and is affine on each
    simplex of the subdivision; points outside the box are first clamped
    onto it, so the covering is of the whole space.
    """
    if f.dim_in != grid.dim:
        raise DimensionMismatch(f"oracle dim {f.dim_in} vs grid dim {grid.dim}")
    cache: dict[tuple[int, ...], Vector] = {}

    def sample(index: tuple[int, ...]) -> Vector:
        if index not in cache:
            cache[index] = f(grid.vertex(index))
        return cache[index]

    cells = []
    pieces = []
    for box in grid.boxes():
        for order in permutations(range(grid.dim)):
            indices = _simplex_vertices(box, order)
            points = [grid.vertex(i) for i in indices]
            values = [sample(i) for i in indices]
            cells.append(_simplex_cell(grid, box, order))
            pieces.append(_interpolant(points, values))
    on_box = PwaMap(cells, pieces)
    return compose(on_box, _clamp_map(grid))


def _simplex_samples(
    points: Sequence[Vector], count: int, rng: random.Random
) -> Iterator[Vector]:
    for _ in range(count):
        weights = [rng.randint(1, 9) for _ in points]
        total = sum(weights)
        mix = points[0].scale(Fraction(weights[0], total))
        for w, p in zip(weights[1:], points[1:]):
            mix = mix + p.scale(Fraction(w, total))
        yield mix


def sup_error(
    f: FunctionOracle,
    p: PwaMap,
    grid: BoxGrid,
    samples_per_cell: int,
    seed: int = 0,
) -> Fraction:
    """Largest max-coordinate deviation of p from f over sampled box points.

    Samples every grid vertex plus samples_per_cell random rational points
    inside each simplex of the subdivision; the result is a lower bound on
    the true supremum over the box.
    """
    if f.dim_in != grid.dim or p.dim_in != grid.dim:
        raise DimensionMismatch("map, oracle, and grid dimensions must agree")
    if f.dim_out != p.dim_out:
        raise DimensionMismatch(
            f"oracle dim_out {f.dim_out} vs map dim_out {p.dim_out}"
        )
    rng = random.Random(seed)

    def deviation(x: Vector) -> Fraction:
        diff = f(x) - eval_map(p, x)
        return max(abs(c) for c in diff.coords)

    worst = Fraction(0)
    for v in grid.vertices():
        worst = max(worst, deviation(v))
    for box in grid.boxes():
        for order in permutations(range(grid.dim)):
            points = [grid.vertex(i) for i in _simplex_vertices(box, order)]
            for x in _simplex_samples(points, samples_per_cell, rng):
                worst = max(worst, deviation(x))
    return worst
