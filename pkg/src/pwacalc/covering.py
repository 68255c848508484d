"""Polyhedral coverings, sign-cell arrangements and partition refinement.

A covering is a finite family of convex cells whose union is a given ambient
polyhedron. The workhorse is enumeration of the sign cells of a hyperplane
arrangement: for every hyperplane pick one closed side; nonempty choices tile
the space, and any two such cells are either equal or have disjoint relative
interiors. Coverage tests, partition refinement and validity checks all run on
that enumeration with exact LP pruning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import AmbientNotSolid, DimensionMismatch
from .geometry import Halfspace, Vector
from .lp import strict_witness
from .polyhedra import (
    ConvexPolyhedron,
    contained_in,
    contained_in_halfspace,
    feasible_point,
    has_interior,
    intersect,
    is_empty,
    relative_interiors_intersect,
)


@dataclass(frozen=True)
class Covering:
    """Cells inside a common ambient polyhedron, expected to cover it."""

    ambient: ConvexPolyhedron
    cells: tuple[ConvexPolyhedron, ...]

    def __init__(self, ambient: ConvexPolyhedron, cells: Iterable[ConvexPolyhedron]):
        cs = tuple(cells)
        for c in cs:
            if c.dim != ambient.dim:
                raise DimensionMismatch(f"cell dim {c.dim} vs ambient dim {ambient.dim}")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "cells", cs)

    @property
    def dim(self) -> int:
        return self.ambient.dim


@dataclass(frozen=True)
class Partition(Covering):
    """A covering whose cells additionally have pairwise disjoint relative interiors."""


@dataclass(frozen=True)
class SignCell:
    """One sign-vector cell of an arrangement.

    index_set holds the indices of hyperplanes taken with their <= side; all
    other hyperplanes are taken with >=.
    """

    index_set: frozenset[int]
    polyhedron: ConvexPolyhedron


def hyperplane_key(h: Halfspace) -> Optional[Halfspace]:
    """Canonical representative of the boundary hyperplane of h.

    Scaled by a positive factor so the first nonzero normal coordinate is +1
    or -1; positive scaling only, so a halfspace and its flipped twin keep
    distinct keys. Returns None for zero normals (no hyperplane).
    """
    first = next((c for c in h.normal.coords if c != 0), None)
    if first is None:
        return None
    scale = 1 / abs(first)
    return Halfspace(h.normal.scale(scale), h.bound * scale)


def collect_hyperplanes(cells: Iterable[ConvexPolyhedron]) -> list[Halfspace]:
    """Deduplicated canonical hyperplanes bounding the given cells."""
    seen = set()
    out: list[Halfspace] = []
    for cell in cells:
        for h in cell.halfspaces:
            key = hyperplane_key(h)
            if key is None:
                continue
            sig = (key.normal.coords, key.bound)
            if sig not in seen:
                seen.add(sig)
                out.append(key)
    return out


def enumerate_sign_cells(
    hyperplanes: Sequence[Halfspace],
    ambient: Optional[ConvexPolyhedron] = None,
    dim: Optional[int] = None,
) -> list[SignCell]:
    """All nonempty closed sign cells of the arrangement, restricted to ambient.

    Depth-first over the hyperplanes with emptiness pruning; cells are closed,
    so lower-dimensional slices appear when both sides degenerate together.
    """
    if ambient is None:
        if dim is None:
            if not hyperplanes:
                raise DimensionMismatch("need an ambient or a dimension")
            dim = hyperplanes[0].dim
        ambient = ConvexPolyhedron(dim, ())
    out: list[SignCell] = []

    # point is a known feasible point of the current rows, or None when the
    # parent's point fell on the wrong side; only then is an LP needed.
    def walk(idx: int, rows: list[Halfspace], chosen: set[int], point) -> None:
        if point is None:
            point = feasible_point(ConvexPolyhedron(ambient.dim, rows))
            if point is None:
                return
        if idx == len(hyperplanes):
            out.append(
                SignCell(frozenset(chosen), ConvexPolyhedron(ambient.dim, rows))
            )
            return
        h = hyperplanes[idx]
        chosen.add(idx)
        walk(idx + 1, rows + [h], chosen, point if h.contains(point) else None)
        chosen.discard(idx)
        flipped = h.flipped()
        walk(idx + 1, rows + [flipped], chosen, point if flipped.contains(point) else None)

    walk(0, list(ambient.halfspaces), set(), feasible_point(ambient))
    return out


def covers(cells: Sequence[ConvexPolyhedron], ambient: ConvexPolyhedron) -> bool:
    """Exact test for the union of cells containing ambient.

    Enumerates the nonempty sign cells of the arrangement of every bounding
    hyperplane (of cells and ambient alike) restricted to ambient and checks
    each is contained in some cell. When the ambient has nonempty interior the
    enumeration walks open sides only and containment of a sign cell reduces
    to membership of its strictly-interior witness, which is equivalent: a
    point strictly off every arrangement hyperplane lies in a cell exactly
    when its whole sign cell does, and the strict sign cells are dense in a
    solid ambient.
    """
    if any(c.dim != ambient.dim for c in cells):
        raise DimensionMismatch("cells and ambient have different ambient dims")
    hyperplanes = collect_hyperplanes(list(cells) + [ambient])
    if strict_witness((), ambient.halfspaces, dim=ambient.dim) is None:
        return True  # empty ambient is covered by anything
    if has_interior(ambient):
        return _covers_solid(cells, ambient, hyperplanes)
    return _covers_general(cells, ambient, hyperplanes)


def _covers_solid(cells, ambient, hyperplanes) -> bool:
    def walk(idx: int, strict_rows: list[Halfspace]) -> bool:
        w = strict_witness(strict_rows, ambient.halfspaces, dim=ambient.dim)
        if w is None:
            return True
        if idx == len(hyperplanes):
            return any(c.contains(w) for c in cells)
        h = hyperplanes[idx]
        return walk(idx + 1, strict_rows + [h]) and walk(idx + 1, strict_rows + [h.flipped()])

    return walk(0, [])


def _covers_general(cells, ambient, hyperplanes) -> bool:
    def walk(idx: int, rows: list[Halfspace]) -> bool:
        region = ConvexPolyhedron(ambient.dim, rows)
        if is_empty(region):
            return True
        if idx == len(hyperplanes):
            return any(contained_in(region, c) for c in cells)
        h = hyperplanes[idx]
        return walk(idx + 1, rows + [h]) and walk(idx + 1, rows + [h.flipped()])

    return walk(0, list(ambient.halfspaces))


def is_partition(cells: Sequence[ConvexPolyhedron], ambient: ConvexPolyhedron) -> bool:
    """covers() plus pairwise disjoint relative interiors."""
    if not covers(cells, ambient):
        return False
    live = [c for c in cells if not is_empty(c)]
    for i in range(len(live)):
        for j in range(i + 1, len(live)):
            if relative_interiors_intersect(live[i], live[j]):
                return False
    return True


def solidify(covering: Covering) -> Covering:
    """Keep only cells with nonempty interior.

    Requires the ambient itself to be solid (interior nonempty), in which case
    the solid cells still cover it. Raises AmbientNotSolid otherwise.
    """
    if not has_interior(covering.ambient):
        raise AmbientNotSolid("solidify needs an ambient with nonempty interior")
    solid = tuple(c for c in covering.cells if has_interior(c))
    return Covering(covering.ambient, solid)


@dataclass(frozen=True)
class RefinedCell:
    """One output cell of refine_to_partition with its provenance.

    owner is the index of an input cell containing it; index_set is the sign
    vector it came from; witness is a point of the cell strictly off every
    arrangement hyperplane, in the relative interior of the ambient's slice.
    """

    polyhedron: ConvexPolyhedron
    owner: int
    index_set: frozenset[int]
    witness: Vector


def _splits_ambient(h: Halfspace, ambient: ConvexPolyhedron) -> bool:
    """False when the hyperplane of h contains the whole ambient."""
    return not (
        contained_in_halfspace(ambient, h)
        and contained_in_halfspace(ambient, h.flipped())
    )


def _solid_sign_cells(
    hyperplanes: Sequence[Halfspace], ambient: ConvexPolyhedron
) -> list[tuple[SignCell, Vector]]:
    """Sign cells with interior points relative to the ambient, with one each.

    The walk keeps a witness strictly off every hyperplane chosen so far and
    only solves a strict LP when a branch loses it, so degenerate slices are
    never materialized.
    """
    out: list[tuple[SignCell, Vector]] = []

    def walk(idx, rows, strict, chosen, point) -> None:
        if point is None:
            point = strict_witness(strict, ambient.halfspaces, dim=ambient.dim)
            if point is None:
                return
        if idx == len(hyperplanes):
            cell = SignCell(frozenset(chosen), ConvexPolyhedron(ambient.dim, rows))
            out.append((cell, point))
            return
        h = hyperplanes[idx]
        margin = h.normal.dot(point) - h.bound
        chosen.add(idx)
        walk(idx + 1, rows + [h], strict + [h], chosen, point if margin < 0 else None)
        chosen.discard(idx)
        flipped = h.flipped()
        walk(
            idx + 1,
            rows + [flipped],
            strict + [flipped],
            chosen,
            point if margin > 0 else None,
        )

    start = strict_witness([], ambient.halfspaces, dim=ambient.dim)
    if start is not None:
        walk(0, list(ambient.halfspaces), [], set(), start)
    return out


def refine_cells(
    cells: Sequence[ConvexPolyhedron],
    ambient: ConvexPolyhedron,
) -> list[RefinedCell]:
    """Sign-cell refinement of a covering, with ownership bookkeeping.

    Enumerates the full-dimensional (relative to the ambient) sign cells of
    the arrangement of every cell-bounding hyperplane and keeps those
    contained in some input cell. The kept cells partition the ambient
    whenever the input cells cover it; degenerate slices along the
    hyperplanes are omitted, as they carry no area of their own.

    Ownership runs on sign vectors, not on containment LPs: every constraint
    row of an input cell demands the <= side of its own canonical hyperplane,
    and a solid sign cell lies in the input cell exactly when it chose every
    demanded side. Hyperplanes containing the whole ambient split nothing and
    are discarded up front, which keeps flat ambients covered.
    """
    hyperplanes = [
        h for h in collect_hyperplanes(cells) if _splits_ambient(h, ambient)
    ]
    entry_of = {(h.normal.coords, h.bound): i for i, h in enumerate(hyperplanes)}

    # Demanded <= sides per input cell; None marks a cell emptied by an
    # infeasible zero-normal row, which can own nothing. Rows on discarded
    # hyperplanes hold everywhere on the ambient and demand nothing.
    demands: list[Optional[frozenset[int]]] = []
    for cell in cells:
        need: set[int] = set()
        dead = False
        for h in cell.halfspaces:
            key = hyperplane_key(h)
            if key is None:
                if h.bound < 0:
                    dead = True
                    break
                continue
            entry = entry_of.get((key.normal.coords, key.bound))
            if entry is not None:
                need.add(entry)
        demands.append(None if dead else frozenset(need))

    kept: list[RefinedCell] = []
    for sc, witness in _solid_sign_cells(hyperplanes, ambient):
        owner = next(
            (
                i
                for i, need in enumerate(demands)
                if need is not None and need <= sc.index_set
            ),
            None,
        )
        if owner is not None:
            kept.append(RefinedCell(sc.polyhedron, owner, sc.index_set, witness))
    return kept


def refine_to_partition(covering: Covering) -> Partition:
    """Refine a covering into a partition of the same ambient."""
    refined = refine_cells(covering.cells, covering.ambient)
    return Partition(covering.ambient, tuple(r.polyhedron for r in refined))
