"""Canonical analytic forms of piecewise affine maps.

Every piecewise affine map can be written with finitely many affine maps
combined by lattice operations in the order of a simplicial cone: a convex map
as a plain max, any map as a min of maxes (or max of mins), as a difference of
two convex maxes, and as a single two-index family whose sup-inf and inf-sup
evaluations agree. The constructions here are cellwise: selection groups are
decided by exact LPs over a solid refining partition, and vector-valued forms
are assembled coordinatewise over multi-indices. Families can blow up
combinatorially, so every conversion takes a member cap and refuses to build
anything larger.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, FormTooLarge, NotConvex
from .geometry import (
    AffineMap,
    OrderingCone,
    Vector,
    affine_add,
    affine_compose,
    affine_stack,
    affine_sub,
    standard_cone,
    zero_vector,
)
from .lp import solve_lp
from .polyhedra import ConvexPolyhedron
from .pwa import PwaMap, _functional, solid_refined_pieces

FORM_CAP = 100_000


def _check_members(members: Sequence[AffineMap], cone: OrderingCone, label: str) -> None:
    if not members:
        raise DimensionMismatch(f"{label} must have at least one affine map")
    dim_in, dim_out = members[0].dim_in, members[0].dim_out
    for f in members:
        if f.dim_in != dim_in or f.dim_out != dim_out:
            raise DimensionMismatch(f"{label} members have mixed shapes")
    if cone.dim != dim_out:
        raise DimensionMismatch(f"cone dim {cone.dim} vs member output dim {dim_out}")


@dataclass(frozen=True)
class MaxOfAffine:
    """Coordinatewise max of affine maps in the cone's basis."""

    members: tuple[AffineMap, ...]
    cone: OrderingCone

    def __init__(self, members: Iterable[AffineMap], cone: OrderingCone):
        ms = tuple(members)
        _check_members(ms, cone, "max-of-affine")
        object.__setattr__(self, "members", ms)
        object.__setattr__(self, "cone", cone)

    @property
    def dim_in(self) -> int:
        return self.members[0].dim_in

    @property
    def dim_out(self) -> int:
        return self.members[0].dim_out

    @property
    def member_count(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class _GroupedForm:
    groups: tuple[tuple[AffineMap, ...], ...]
    cone: OrderingCone

    def __init__(self, groups: Iterable[Iterable[AffineMap]], cone: OrderingCone):
        gs = tuple(tuple(g) for g in groups)
        if not gs:
            raise DimensionMismatch("form must have at least one group")
        for g in gs:
            _check_members(g, cone, "group")
        shape = (gs[0][0].dim_in, gs[0][0].dim_out)
        for g in gs:
            if (g[0].dim_in, g[0].dim_out) != shape:
                raise DimensionMismatch("groups have mixed shapes")
        object.__setattr__(self, "groups", gs)
        object.__setattr__(self, "cone", cone)

    @property
    def dim_in(self) -> int:
        return self.groups[0][0].dim_in

    @property
    def dim_out(self) -> int:
        return self.groups[0][0].dim_out

    @property
    def member_count(self) -> int:
        return sum(len(g) for g in self.groups)


class MinMaxForm(_GroupedForm):
    """Min over groups of the max within each group."""


class MaxMinForm(_GroupedForm):
    """Max over groups of the min within each group."""


@dataclass(frozen=True)
class DcForm:
    """Difference of two maxes of affine maps: max(plus) - max(minus)."""

    plus: tuple[AffineMap, ...]
    minus: tuple[AffineMap, ...]
    cone: OrderingCone

    def __init__(
        self, plus: Iterable[AffineMap], minus: Iterable[AffineMap], cone: OrderingCone
    ):
        ps, ms = tuple(plus), tuple(minus)
        _check_members(ps, cone, "plus family")
        _check_members(ms, cone, "minus family")
        if (ps[0].dim_in, ps[0].dim_out) != (ms[0].dim_in, ms[0].dim_out):
            raise DimensionMismatch("plus and minus families have different shapes")
        object.__setattr__(self, "plus", ps)
        object.__setattr__(self, "minus", ms)
        object.__setattr__(self, "cone", cone)

    @property
    def dim_in(self) -> int:
        return self.plus[0].dim_in

    @property
    def dim_out(self) -> int:
        return self.plus[0].dim_out

    @property
    def member_count(self) -> int:
        return len(self.plus) + len(self.minus)


@dataclass(frozen=True)
class CommonFamily:
    """Two-index family whose sup-inf and inf-sup evaluations coincide.

    rows[i][j] holds one affine map; evaluation takes sup over i of inf over j
    (equivalently inf over j of sup over i) in the cone's coordinates.
    """

    rows: tuple[tuple[AffineMap, ...], ...]
    cone: OrderingCone

    def __init__(self, rows: Iterable[Iterable[AffineMap]], cone: OrderingCone):
        rs = tuple(tuple(r) for r in rows)
        if not rs or not rs[0]:
            raise DimensionMismatch("family must have at least one row and column")
        width = len(rs[0])
        for r in rs:
            if len(r) != width:
                raise DimensionMismatch("family rows have different lengths")
            _check_members(r, cone, "family row")
        object.__setattr__(self, "rows", rs)
        object.__setattr__(self, "cone", cone)

    @property
    def dim_in(self) -> int:
        return self.rows[0][0].dim_in

    @property
    def dim_out(self) -> int:
        return self.rows[0][0].dim_out

    @property
    def member_count(self) -> int:
        return len(self.rows) * len(self.rows[0])


def _dedup(maps: Iterable) -> list:
    return list(dict.fromkeys(maps))


def _guard(count: int, cap: int) -> None:
    if count > cap:
        raise FormTooLarge(f"form would hold {count} affine maps (cap {cap})")


def _scalar_max_value(f: AffineMap, cell: ConvexPolyhedron):
    """Max of a scalar affine map over a cell: Fraction, or None if unbounded."""
    result = solve_lp(Vector(f.linear[0]), cell.halfspaces, "max")
    if result.is_unbounded:
        return None
    return result.value + f.offset[0]


def _scalar_min_value(f: AffineMap, cell: ConvexPolyhedron):
    result = solve_lp(Vector(f.linear[0]), cell.halfspaces, "min")
    if result.is_unbounded:
        return None
    return result.value + f.offset[0]


def _assemble(choice: Sequence[AffineMap], cone: OrderingCone) -> AffineMap:
    """Stack one scalar map per cone coordinate into a vector map."""
    t = affine_stack(list(choice))
    if cone.is_standard():
        return t
    gen = AffineMap(cone.generator_matrix(), zero_vector(cone.dim))
    return affine_compose(gen, t)


def _combine_families(
    families: Sequence[Sequence[AffineMap]], cone: OrderingCone, cap: int
) -> list[AffineMap]:
    """All coordinatewise stacks, one member from each scalar family."""
    _guard(prod(len(f) for f in families), cap)
    return _dedup(_assemble(choice, cone) for choice in product(*families))


def is_convex(p: PwaMap, cone: Optional[OrderingCone] = None) -> bool:
    """Whether p is convex in the order induced by the cone.

    Decided coordinatewise on a solid refining partition: the map is convex
    iff on each cell its own piece dominates every other piece.
    """
    if cone is None:
        cone = standard_cone(p.dim_out)
    if cone.dim != p.dim_out:
        raise DimensionMismatch(f"cone dim {cone.dim} vs output dim {p.dim_out}")
    cells, pieces = solid_refined_pieces(p)
    for d in cone.duals:
        scalars = _dedup(_functional(d, f) for f in pieces)
        own = [_functional(d, f) for f in pieces]
        for j, cell in enumerate(cells):
            for h in scalars:
                if h == own[j]:
                    continue
                top = _scalar_max_value(affine_sub(h, own[j]), cell)
                if top is None or top > 0:
                    return False
    return True


def convex_to_max_form(
    p: PwaMap, cone: Optional[OrderingCone] = None, max_members: int = FORM_CAP
) -> MaxOfAffine:
    """A convex map as the coordinatewise max of finitely many affine maps."""
    if cone is None:
        cone = standard_cone(p.dim_out)
    if not is_convex(p, cone):
        raise NotConvex("the map is not convex in this cone order")
    _, pieces = solid_refined_pieces(p)
    families = [_dedup(_functional(d, f) for f in pieces) for d in cone.duals]
    members = _combine_families(families, cone, max_members)
    return MaxOfAffine(members, cone)


def _selection_groups(
    cells: Sequence[ConvexPolyhedron],
    scalars: Sequence[AffineMap],
    keep_above: bool,
) -> list[tuple[AffineMap, ...]]:
    """Per cell, the scalar pieces lying entirely above (or below) its own.

    keep_above selects {h_j : h_j >= h_i on cell i}; otherwise <=. The own
    piece always qualifies, so groups are nonempty.
    """
    groups: list[tuple[AffineMap, ...]] = []
    for i, cell in enumerate(cells):
        chosen: list[AffineMap] = []
        for h in scalars:
            diff = affine_sub(h, scalars[i])
            if keep_above:
                low = _scalar_min_value(diff, cell)
                ok = low is not None and low >= 0
            else:
                high = _scalar_max_value(diff, cell)
                ok = high is not None and high <= 0
            if ok:
                chosen.append(h)
        groups.append(tuple(_dedup(chosen)))
    return _dedup(groups)


def _scalar_groups_per_coordinate(
    p: PwaMap, cone: OrderingCone, keep_above: bool
) -> list[list[tuple[AffineMap, ...]]]:
    cells, pieces = solid_refined_pieces(p)
    out = []
    for d in cone.duals:
        scalars = [_functional(d, f) for f in pieces]
        out.append(_selection_groups(cells, scalars, keep_above))
    return out


def to_min_max(
    p: PwaMap,
    cone: Optional[OrderingCone] = None,
    orientation: str = "minmax",
    max_members: int = FORM_CAP,
):
    """p as a min of maxes of affine maps ("minmax") or a max of mins ("maxmin").

    Scalar coordinates get one group per solid partition cell: for minmax the
    pieces below the cell's own piece on that cell, for maxmin the pieces
    above it. Vector outputs take one group per choice of scalar group in
    each cone coordinate.
    """
    if orientation not in ("minmax", "maxmin"):
        raise DimensionMismatch(f"orientation must be 'minmax' or 'maxmin', got {orientation!r}")
    if cone is None:
        cone = standard_cone(p.dim_out)
    if cone.dim != p.dim_out:
        raise DimensionMismatch(f"cone dim {cone.dim} vs output dim {p.dim_out}")
    per_coord = _scalar_groups_per_coordinate(p, cone, keep_above=(orientation == "maxmin"))
    _guard(prod(sum(len(g) for g in groups) for groups in per_coord), max_members)
    vgroups: list[tuple[AffineMap, ...]] = []
    for pick in product(*[range(len(groups)) for groups in per_coord]):
        chosen = [per_coord[s][pick[s]] for s in range(len(per_coord))]
        inner = _dedup(_assemble(choice, cone) for choice in product(*chosen))
        vgroups.append(tuple(inner))
    vgroups = _dedup(vgroups)
    kind = MaxMinForm if orientation == "maxmin" else MinMaxForm
    return kind(vgroups, cone)


def _scalar_dc(groups: Sequence[tuple[AffineMap, ...]], dim_in: int, cap: int):
    """Difference-of-max families for min over groups of max within group.

    Uses the identity min_i g_i = sum_i g_i - max_i sum_{l != i} g_l on the
    convex functions g_i = max of group i, expanded into affine sums.
    """
    zero = AffineMap([[Fraction(0)] * dim_in], [Fraction(0)])
    _guard(prod(len(g) for g in groups), cap)
    minus_count = sum(prod(len(g) for l, g in enumerate(groups) if l != i) for i in range(len(groups)))
    _guard(minus_count, cap)

    def sums(parts: Sequence[tuple[AffineMap, ...]]) -> list[AffineMap]:
        out = []
        for choice in product(*parts):
            total = zero
            for f in choice:
                total = affine_add(total, f)
            out.append(total)
        return _dedup(out)

    plus = sums(groups)
    if len(groups) == 1:
        minus = [zero]
    else:
        minus = _dedup(
            f
            for i in range(len(groups))
            for f in sums([g for l, g in enumerate(groups) if l != i])
        )
    return plus, minus


def to_dc(
    p: PwaMap, cone: Optional[OrderingCone] = None, max_members: int = FORM_CAP
) -> DcForm:
    """p as a difference of two convex maxes of affine maps."""
    if cone is None:
        cone = standard_cone(p.dim_out)
    if cone.dim != p.dim_out:
        raise DimensionMismatch(f"cone dim {cone.dim} vs output dim {p.dim_out}")
    per_coord = _scalar_groups_per_coordinate(p, cone, keep_above=False)
    plus_fams: list[list[AffineMap]] = []
    minus_fams: list[list[AffineMap]] = []
    for groups in per_coord:
        plus_s, minus_s = _scalar_dc(groups, p.dim_in, max_members)
        plus_fams.append(plus_s)
        minus_fams.append(minus_s)
    plus = _combine_families(plus_fams, cone, max_members)
    minus = _combine_families(minus_fams, cone, max_members)
    return DcForm(plus, minus, cone)


def to_common_family(
    p: PwaMap, cone: Optional[OrderingCone] = None, max_members: int = FORM_CAP
) -> CommonFamily:
    """One two-index family computing p under both evaluation orders.

    Built from the difference form: entry (i, j) is plus_i - minus_j, so
    sup over i of inf over j equals inf over j of sup over i equals p.
    """
    dc = to_dc(p, cone, max_members)
    _guard(len(dc.plus) * len(dc.minus), max_members)
    rows = tuple(tuple(affine_sub(c, d) for d in dc.minus) for c in dc.plus)
    return CommonFamily(rows, dc.cone)


def _extreme_of_points(points: Sequence[Vector], cone: OrderingCone, pick) -> Vector:
    coords = [cone.coordinates(v) for v in points]
    t = Vector([pick(c[s] for c in coords) for s in range(cone.dim)])
    return cone.from_coordinates(t)


def _extreme_of_maps(maps: Sequence[AffineMap], x: Vector, cone: OrderingCone, pick) -> Vector:
    return _extreme_of_points([f(x) for f in maps], cone, pick)


def eval_form(form, x: Vector) -> Vector:
    """Evaluate any canonical form at a point, exactly."""
    if x.dim != form.dim_in:
        raise DimensionMismatch(f"point dim {x.dim} vs form input dim {form.dim_in}")
    cone = form.cone
    if isinstance(form, MaxOfAffine):
        return _extreme_of_maps(form.members, x, cone, max)
    if isinstance(form, MinMaxForm):
        inner = [_extreme_of_maps(g, x, cone, max) for g in form.groups]
        return _extreme_of_points(inner, cone, min)
    if isinstance(form, MaxMinForm):
        inner = [_extreme_of_maps(g, x, cone, min) for g in form.groups]
        return _extreme_of_points(inner, cone, max)
    if isinstance(form, DcForm):
        return _extreme_of_maps(form.plus, x, cone, max) - _extreme_of_maps(
            form.minus, x, cone, max
        )
    if isinstance(form, CommonFamily):
        rows = [_extreme_of_maps(r, x, cone, min) for r in form.rows]
        return _extreme_of_points(rows, cone, max)
    raise TypeError(f"not a canonical form: {type(form).__name__}")


def eval_family_orders(family: CommonFamily, x: Vector) -> tuple[Vector, Vector]:
    """(sup-inf, inf-sup) evaluations of a two-index family at a point."""
    cone = family.cone
    rows = [_extreme_of_maps(r, x, cone, min) for r in family.rows]
    sup_inf = _extreme_of_points(rows, cone, max)
    width = len(family.rows[0])
    cols = [
        _extreme_of_maps([r[j] for r in family.rows], x, cone, max) for j in range(width)
    ]
    inf_sup = _extreme_of_points(cols, cone, min)
    return sup_inf, inf_sup
