"""Piecewise affine maps: representation, algebra, graphs and epigraphs.

A PwaMap is a finite family of closed convex cells covering the whole input
space, with one affine piece per cell; pieces must agree wherever cells
overlap, so the map is single-valued. Algebraic operations work cellwise on
common refinements, composition pulls outer cells back through inner pieces,
and the graph and epigraph of a map are finite unions of convex polyhedra.
The reverse direction reconstructs a map from such a polyhedral graph, with
exact verification that the input really is the graph of a total map.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence

from .covering import RefinedCell, covers, refine_cells
from .errors import DimensionMismatch, NoCellFound, NotAFunctionGraph
from .geometry import (
    AffineMap,
    Halfspace,
    OrderingCone,
    Vector,
    affine_add,
    affine_compose,
    affine_scale,
    affine_stack,
    affine_sub,
    halfspace_preimage,
    standard_cone,
    unit_vector,
    zero_vector,
)
from .lp import solve_lp
from .polyhedra import (
    ConvexPolyhedron,
    PolyhedralSet,
    affine_hull,
    has_interior,
    intersect,
    is_empty,
    preimage,
    project_out,
    union_contains,
    whole_space,
)


@dataclass(frozen=True)
class PwaMap:
    """Affine pieces on convex cells that together cover the whole space.

    Only shape constraints are enforced on construction; the covering and
    consistency semantics are checked by validate, which is LP-heavy.
    """

    dim_in: int
    dim_out: int
    cells: tuple[ConvexPolyhedron, ...]
    pieces: tuple[AffineMap, ...]

    def __init__(self, cells: Iterable[ConvexPolyhedron], pieces: Iterable[AffineMap]):
        cs = tuple(cells)
        ps = tuple(pieces)
        if not cs or len(cs) != len(ps):
            raise DimensionMismatch("need one piece per cell and at least one cell")
        dim_in = cs[0].dim
        dim_out = ps[0].dim_out
        if dim_in < 1 or dim_out < 1:
            raise DimensionMismatch("input and output dimensions must be positive")
        for c in cs:
            if c.dim != dim_in:
                raise DimensionMismatch(f"cell dim {c.dim} vs input dim {dim_in}")
        for p in ps:
            if p.dim_in != dim_in or p.dim_out != dim_out:
                raise DimensionMismatch("piece shape differs from the map's")
        object.__setattr__(self, "dim_in", dim_in)
        object.__setattr__(self, "dim_out", dim_out)
        object.__setattr__(self, "cells", cs)
        object.__setattr__(self, "pieces", ps)

    def __call__(self, x: Vector) -> Vector:
        return eval_map(self, x)


def affine_as_map(f: AffineMap) -> PwaMap:
    """An affine map as a one-cell piecewise map on the whole space."""
    return PwaMap([whole_space(f.dim_in)], [f])


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the covering and consistency checks of a PwaMap."""

    covered: bool
    inconsistent_pairs: tuple[tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return self.covered and not self.inconsistent_pairs


def _functional(d: Vector, f: AffineMap) -> AffineMap:
    """The scalar map x -> d . f(x)."""
    return affine_compose(AffineMap([d.coords], [Fraction(0)]), f)


def _scalar_range(f: AffineMap, cell: ConvexPolyhedron, direction: str):
    """Optimize a scalar affine map over a cell; returns an LP result shifted
    so .value (when optimal) is the value of f, not of its linear part."""
    result = solve_lp(Vector(f.linear[0]), cell.halfspaces, direction)
    if result.is_optimal:
        return replace(result, value=result.value + f.offset[0])
    return result


def validate(p: PwaMap) -> ValidationReport:
    """Check that cells cover the space and overlapping pieces agree.

    Agreement of pieces i and j is decided per output coordinate by two LPs:
    the difference must have max and min both zero over the intersection; an
    unbounded difference is a disagreement.
    """
    covered = covers(p.cells, whole_space(p.dim_in))
    bad: list[tuple[int, int]] = []
    for i in range(len(p.cells)):
        for j in range(i + 1, len(p.cells)):
            m = intersect(p.cells[i], p.cells[j])
            if is_empty(m):
                continue
            if not _pieces_agree(p.pieces[i], p.pieces[j], m):
                bad.append((i, j))
    return ValidationReport(covered, tuple(bad))


def _pieces_agree(f: AffineMap, g: AffineMap, m: ConvexPolyhedron) -> bool:
    for k in range(f.dim_out):
        diff = affine_sub(f.row(k), g.row(k))
        hi = _scalar_range(diff, m, "max")
        if not hi.is_optimal or hi.value != 0:
            return False
        lo = _scalar_range(diff, m, "min")
        if not lo.is_optimal or lo.value != 0:
            return False
    return True


def eval_map(p: PwaMap, x: Vector) -> Vector:
    """Value at x, taken from the first cell containing it."""
    if x.dim != p.dim_in:
        raise DimensionMismatch(f"point dim {x.dim} vs input dim {p.dim_in}")
    idx = next((i for i, c in enumerate(p.cells) if c.contains(x)), None)
    if idx is None:
        raise NoCellFound(f"no cell contains {x!r}")
    value = p.pieces[idx](x)
    if __debug__:
        for i in range(idx + 1, len(p.cells)):
            if p.cells[i].contains(x):
                assert p.pieces[i](x) == value, "pieces disagree at a shared point"
    return value


def linear_combine(alpha, p: PwaMap, beta, q: PwaMap) -> PwaMap:
    """The map x -> alpha p(x) + beta q(x) on the common cell refinement."""
    if p.dim_in != q.dim_in or p.dim_out != q.dim_out:
        raise DimensionMismatch("maps have different shapes")
    cells: list[ConvexPolyhedron] = []
    pieces: list[AffineMap] = []
    for ci, fi in zip(p.cells, p.pieces):
        for cj, gj in zip(q.cells, q.pieces):
            m = intersect(ci, cj)
            if is_empty(m):
                continue
            cells.append(m)
            pieces.append(affine_add(affine_scale(fi, alpha), affine_scale(gj, beta)))
    return PwaMap(cells, pieces)


def add(p: PwaMap, q: PwaMap) -> PwaMap:
    return linear_combine(1, p, 1, q)


def scale(p: PwaMap, factor) -> PwaMap:
    return PwaMap(p.cells, [affine_scale(f, factor) for f in p.pieces])


def negate(p: PwaMap) -> PwaMap:
    return scale(p, -1)


def lattice_sup(p: PwaMap, q: PwaMap, cone: Optional[OrderingCone] = None) -> PwaMap:
    """Pointwise least upper bound in the order induced by the cone."""
    return _lattice_extreme(p, q, cone, take_max=True)


def lattice_inf(p: PwaMap, q: PwaMap, cone: Optional[OrderingCone] = None) -> PwaMap:
    """Pointwise greatest lower bound in the order induced by the cone."""
    return _lattice_extreme(p, q, cone, take_max=False)


def _lattice_extreme(p: PwaMap, q: PwaMap, cone: Optional[OrderingCone], take_max: bool) -> PwaMap:
    if p.dim_in != q.dim_in or p.dim_out != q.dim_out:
        raise DimensionMismatch("maps have different shapes")
    if cone is None:
        cone = standard_cone(p.dim_out)
    if cone.dim != p.dim_out:
        raise DimensionMismatch(f"cone dim {cone.dim} vs output dim {p.dim_out}")
    gen = AffineMap(cone.generator_matrix(), zero_vector(p.dim_out))
    standard = cone.is_standard()

    cells: list[ConvexPolyhedron] = []
    pieces: list[AffineMap] = []
    for ci, fi in zip(p.cells, p.pieces):
        for cj, gj in zip(q.cells, q.pieces):
            m = intersect(ci, cj)
            if is_empty(m):
                continue
            rows_f = [_functional(d, fi) for d in cone.duals]
            rows_g = [_functional(d, gj) for d in cone.duals]
            deltas = [affine_sub(rf, rg) for rf, rg in zip(rows_f, rows_g)]
            split = [
                s
                for s, d in enumerate(deltas)
                if any(c != 0 for c in d.linear[0]) or d.offset[0] != 0
            ]
            for signs in product((True, False), repeat=len(split)):
                extra: list[Halfspace] = []
                for s, f_below in zip(split, signs):
                    # f_below: the side where delta_s <= 0, i.e. f's coordinate
                    # is the smaller one.
                    h = Halfspace(Vector(deltas[s].linear[0]), -deltas[s].offset[0])
                    extra.append(h if f_below else h.flipped())
                cell = m.with_constraints(extra)
                if is_empty(cell):
                    continue
                chosen: list[AffineMap] = []
                side = dict(zip(split, signs))
                for s in range(p.dim_out):
                    if s not in side:
                        chosen.append(rows_f[s])
                    elif side[s] == take_max:
                        # delta <= 0 and we want the max (or delta >= 0 and
                        # the min): g's coordinate wins.
                        chosen.append(rows_g[s])
                    else:
                        chosen.append(rows_f[s])
                t = affine_stack(chosen)
                cells.append(cell)
                pieces.append(t if standard else affine_compose(gen, t))
    return PwaMap(cells, pieces)


def compose(outer: PwaMap, inner: PwaMap) -> PwaMap:
    """The map x -> outer(inner(x))."""
    if inner.dim_out != outer.dim_in:
        raise DimensionMismatch(
            f"inner produces dim {inner.dim_out}, outer expects {outer.dim_in}"
        )
    cells: list[ConvexPolyhedron] = []
    pieces: list[AffineMap] = []
    for cj, gj in zip(inner.cells, inner.pieces):
        for ci, fi in zip(outer.cells, outer.pieces):
            cell = intersect(cj, preimage(ci, gj))
            if is_empty(cell):
                continue
            cells.append(cell)
            pieces.append(affine_compose(fi, gj))
    return PwaMap(cells, pieces)


def coordinates(p: PwaMap, cone: Optional[OrderingCone] = None) -> list[PwaMap]:
    """Scalar coordinate functions of p in the cone's basis."""
    if cone is None:
        cone = standard_cone(p.dim_out)
    if cone.dim != p.dim_out:
        raise DimensionMismatch(f"cone dim {cone.dim} vs output dim {p.dim_out}")
    return [
        PwaMap(p.cells, [_functional(d, f) for f in p.pieces]) for d in cone.duals
    ]


def from_coordinates(maps: Sequence[PwaMap], cone: Optional[OrderingCone] = None) -> PwaMap:
    """Reassemble a vector map from scalar coordinates: sum of p_s(x) e_s."""
    if not maps:
        raise DimensionMismatch("need at least one coordinate map")
    if any(m.dim_out != 1 for m in maps):
        raise DimensionMismatch("coordinate maps must be scalar")
    dim_in = maps[0].dim_in
    if any(m.dim_in != dim_in for m in maps):
        raise DimensionMismatch("coordinate maps must share the input space")
    n = len(maps)
    if cone is None:
        cone = standard_cone(n)
    if cone.dim != n:
        raise DimensionMismatch(f"cone dim {cone.dim} vs {n} coordinates")
    gen = AffineMap(cone.generator_matrix(), zero_vector(n))
    standard = cone.is_standard()

    cells: list[ConvexPolyhedron] = []
    pieces: list[AffineMap] = []
    for idx in product(*[range(len(m.cells)) for m in maps]):
        cell = maps[0].cells[idx[0]]
        for s in range(1, n):
            cell = intersect(cell, maps[s].cells[idx[s]])
        if is_empty(cell):
            continue
        t = affine_stack([maps[s].pieces[idx[s]] for s in range(n)])
        cells.append(cell)
        pieces.append(t if standard else affine_compose(gen, t))
    return PwaMap(cells, pieces)


@lru_cache(maxsize=256)
def solid_refined_pieces(p: PwaMap) -> tuple[tuple[ConvexPolyhedron, ...], tuple[AffineMap, ...]]:
    """Solid cells of a refining partition of the space, with their pieces.

    The returned cells have nonempty interior, cover the whole input space and
    have pairwise disjoint interiors; each carries the piece of an input cell
    containing it.
    """
    refined = refine_cells(p.cells, whole_space(p.dim_in))
    cells = tuple(rc.polyhedron for rc in refined)
    pieces = tuple(p.pieces[rc.owner] for rc in refined)
    return cells, pieces


def _lift_to_graph_space(cell: ConvexPolyhedron, dim_out: int) -> list[Halfspace]:
    pad = [Fraction(0)] * dim_out
    return [
        Halfspace(Vector(list(h.normal.coords) + pad), h.bound) for h in cell.halfspaces
    ]


def graph(p: PwaMap) -> PolyhedralSet:
    """The graph {(x, P(x))} as a finite union of convex polyhedra."""
    n, m = p.dim_in, p.dim_out
    out: list[ConvexPolyhedron] = []
    for cell, f in zip(p.cells, p.pieces):
        rows = _lift_to_graph_space(cell, m)
        for k in range(m):
            a = list(f.linear[k])
            b = f.offset[k]
            ek = [Fraction(1) if l == k else Fraction(0) for l in range(m)]
            # y_k = a . x + b, as two inequalities over (x, y).
            rows.append(Halfspace(Vector([-c for c in a] + ek), b))
            rows.append(Halfspace(Vector(a + [-c for c in ek]), -b))
        out.append(ConvexPolyhedron(n + m, rows))
    return PolyhedralSet(n + m, out)


def _residual_map(f: AffineMap, side: str) -> AffineMap:
    """(x, y) -> y - f(x) for side "epi", (x, y) -> f(x) - y for "hypo"."""
    n, m = f.dim_in, f.dim_out
    sign = 1 if side == "epi" else -1
    rows = []
    for k in range(m):
        xpart = [-sign * c for c in f.linear[k]]
        ypart = [Fraction(sign if l == k else 0) for l in range(m)]
        rows.append(xpart + ypart)
    return AffineMap(rows, f.offset.scale(-sign))


def nonneg_orthant_halfspaces(dim: int) -> list[Halfspace]:
    """The cone {y : y_k >= 0 for all k} as halfspaces."""
    return [Halfspace(-unit_vector(dim, k), 0) for k in range(dim)]


def epigraph(
    p: PwaMap,
    cone_halfspaces: Optional[Sequence[Halfspace]] = None,
    side: str = "epi",
) -> PolyhedralSet:
    """The set {(x, y) : y - P(x) in cone} ("epi") or {P(x) - y in cone} ("hypo").

    The cone is any polyhedron given by halfspaces over the output space; the
    default is the nonnegative orthant. The zero cone (both signs of every
    coordinate) gives back the graph.
    """
    if side not in ("epi", "hypo"):
        raise DimensionMismatch(f"side must be 'epi' or 'hypo', got {side!r}")
    m = p.dim_out
    if cone_halfspaces is None:
        cone_rows: Sequence[Halfspace] = nonneg_orthant_halfspaces(m)
    else:
        cone_rows = tuple(cone_halfspaces)
        for h in cone_rows:
            if h.dim != m:
                raise DimensionMismatch(f"cone halfspace dim {h.dim} vs output dim {m}")
    out: list[ConvexPolyhedron] = []
    for cell, f in zip(p.cells, p.pieces):
        rows = _lift_to_graph_space(cell, m)
        residual = _residual_map(f, side)
        rows.extend(halfspace_preimage(h, residual) for h in cone_rows)
        out.append(ConvexPolyhedron(p.dim_in + m, rows))
    return PolyhedralSet(p.dim_in + m, out)


def hypograph(
    p: PwaMap, cone_halfspaces: Optional[Sequence[Halfspace]] = None
) -> PolyhedralSet:
    return epigraph(p, cone_halfspaces, side="hypo")


def from_graph(graph_set: PolyhedralSet, dim_in: int) -> PwaMap:
    """Recover the piecewise affine map whose graph is the given set.

    Raises NotAFunctionGraph unless the set is exactly the graph of a total
    single-valued piecewise affine map on the whole input space. The check is
    exact: the reconstruction must validate and its graph must equal the
    input as a set.
    """
    if dim_in < 1:
        raise DimensionMismatch("input dimension must be positive")
    m = graph_set.dim - dim_in
    if m < 1:
        raise DimensionMismatch(
            f"graph lives in dim {graph_set.dim}, no room for outputs after {dim_in} inputs"
        )
    live = [g for g in graph_set.pieces if not is_empty(g)]
    if not live:
        raise NotAFunctionGraph("the set is empty")

    if m == 1:
        result = _scalar_from_graph(live, dim_in)
    else:
        coords: list[PwaMap] = []
        for k in range(m):
            drop = [dim_in + l for l in range(m) if l != k]
            images = [project_out(g, drop) for g in live]
            coords.append(_scalar_from_graph(images, dim_in))
        result = from_coordinates(coords)

    report = validate(result)
    if not report.covered:
        raise NotAFunctionGraph("the projection does not cover the input space")
    if report.inconsistent_pairs:
        i, j = report.inconsistent_pairs[0]
        raise NotAFunctionGraph(
            f"two values over a common region (pieces {i} and {j} of the reconstruction)"
        )
    reconstructed = graph(result)
    for g in live:
        if not union_contains(reconstructed.pieces, g):
            raise NotAFunctionGraph("a piece of the set is not on the reconstructed graph")
    if m > 1:
        for g in reconstructed.pieces:
            if not union_contains(live, g):
                raise NotAFunctionGraph("the reconstructed graph exceeds the set")
    return result


def _scalar_from_graph(pieces: Sequence[ConvexPolyhedron], dim_in: int) -> PwaMap:
    """Reconstruction for one output coordinate (last axis is the value)."""
    cells: list[ConvexPolyhedron] = []
    maps: list[AffineMap] = []
    for g in pieces:
        if is_empty(g):
            continue
        proj = project_out(g, [dim_in])
        if not has_interior(proj):
            # A flat projection carries no solid cell; the final graph
            # equality check decides whether the piece was consistent.
            continue
        equalities, _ = affine_hull(g)
        row = next((h for h in equalities if h.normal[dim_in] != 0), None)
        if row is None:
            raise NotAFunctionGraph(
                "a piece with solid projection is not the graph of an affine function"
            )
        alpha = row.normal[dim_in]
        lin = [[-row.normal[j] / alpha for j in range(dim_in)]]
        off = [row.bound / alpha]
        cells.append(proj)
        maps.append(AffineMap(lin, off))
    if not cells:
        raise NotAFunctionGraph("no piece projects onto a solid region")
    return PwaMap(cells, maps)
