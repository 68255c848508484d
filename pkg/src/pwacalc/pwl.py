"""Positive homogeneity: testing and linear canonical forms.

A piecewise affine map P with P(lam * x) = lam * P(x) for every lam >= 0 is
exactly one whose pieces can be taken linear on polyhedral cones. The decision
here is layered: a structural test answers yes when the presentation already
has conic cells and linear pieces; exact sampling answers no with a witness
pair; and the fallback is a complete test against the forced conic candidate.
That candidate's piece on each cone of the central arrangement (every bounding
hyperplane of P's cells translated through the origin) is the linear part of
whichever original cell hosts the far tail of rays into that cone, and P is
homogeneous exactly when it agrees with the candidate everywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .covering import collect_hyperplanes, enumerate_sign_cells
from .errors import InvariantViolation, NonzeroOffsetProduced
from .forms import FORM_CAP, DcForm, MaxMinForm, MinMaxForm, to_dc, to_min_max
from .geometry import (
    AffineMap,
    Halfspace,
    OrderingCone,
    Vector,
    affine_sub,
    zero_vector,
)
from .polyhedra import (
    ConvexPolyhedron,
    feasible_point,
    has_interior,
    interior_point,
    intersect,
    is_empty,
    remove_redundancy,
)
from .pwa import PwaMap, _scalar_range, eval_map, solid_refined_pieces

YES = "yes"
NO = "no"
YES_ON_CONIC_FORM = "yes_on_conic_form"


@dataclass(frozen=True)
class HomogeneityWitness:
    """An exact pair with P(scale * point) != scale * P(point)."""

    point: Vector
    scale: Fraction
    value_at_scaled: Vector
    scaled_value: Vector


@dataclass(frozen=True)
class Decision:
    """Verdict of is_piecewise_linear.

    "yes": the given cells are cones and the pieces linear. "no": witness is
    an exact homogeneity violation. "yes_on_conic_form": the map is
    homogeneous but presented on non-conic cells; conic_map is an equal map
    on cone cells with linear pieces.
    """

    verdict: str
    witness: Optional[HomogeneityWitness] = None
    conic_map: Optional[PwaMap] = None

    @property
    def is_pwl(self) -> bool:
        return self.verdict != NO


@dataclass(frozen=True)
class PwlMap:
    """A positively homogeneous map, wrapped after a passing decision."""

    inner: PwaMap

    @property
    def dim_in(self) -> int:
        return self.inner.dim_in

    @property
    def dim_out(self) -> int:
        return self.inner.dim_out

    def __call__(self, x: Vector) -> Vector:
        return eval_map(self.inner, x)


def _violation(p: PwaMap, x: Vector, lam: Fraction) -> Optional[HomogeneityWitness]:
    lhs = eval_map(p, x.scale(lam))
    rhs = eval_map(p, x).scale(lam)
    if lhs != rhs:
        return HomogeneityWitness(x, lam, lhs, rhs)
    return None


def _conic_presentation(p: PwaMap) -> bool:
    """True when every solid refined cell is a cone carrying a linear piece."""
    if all(piece.is_linear() for piece in p.pieces) and all(
        h.bound == 0 for cell in p.cells for h in cell.halfspaces
    ):
        # refining an all-conic presentation keeps bounds zero, so the
        # refined test below is implied
        return eval_map(p, zero_vector(p.dim_in)) == zero_vector(p.dim_out)
    cells, pieces = solid_refined_pieces(p)
    for cell, piece in zip(cells, pieces):
        if not piece.is_linear():
            return False
        if any(h.bound != 0 for h in remove_redundancy(cell).halfspaces):
            return False
    return eval_map(p, zero_vector(p.dim_in)) == zero_vector(p.dim_out)


def _sampled_witness(p: PwaMap, samples: int) -> Optional[HomogeneityWitness]:
    rng = random.Random(7)
    scales = (Fraction(0), Fraction(1, 2), Fraction(2), Fraction(3))
    for _ in range(samples):
        x = Vector(
            [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(p.dim_in)]
        )
        for lam in scales:
            w = _violation(p, x, lam)
            if w is not None:
                return w
    return None


def _central_cones(p: PwaMap) -> list[ConvexPolyhedron]:
    """Solid cells of the arrangement of P's cell hyperplanes slid to 0."""
    seen = set()
    central: list[Halfspace] = []
    for h in collect_hyperplanes(p.cells):
        normal = h.normal
        first = next(c for c in normal.coords if c != 0)
        if first < 0:
            normal = normal.scale(-1)
        if normal.coords not in seen:
            seen.add(normal.coords)
            central.append(Halfspace(normal, 0))
    sign_cells = enumerate_sign_cells(central, dim=p.dim_in)
    return [sc.polyhedron for sc in sign_cells if has_interior(sc.polyhedron)]


def _ray_tail(p: PwaMap, direction: Vector) -> tuple[ConvexPolyhedron, AffineMap]:
    """Cell hosting {lam * direction : lam large} and its piece made linear.

    A cell qualifies when each bounding halfspace either strictly decreases
    along the ray or is independent of it and already satisfied at infinity.
    """
    for cell, piece in zip(p.cells, p.pieces):
        ok = True
        for h in cell.halfspaces:
            along = h.normal.dot(direction)
            if along > 0 or (along == 0 and h.bound < 0):
                ok = False
                break
        if ok:
            return cell, AffineMap(piece.linear, zero_vector(piece.dim_out))
    raise InvariantViolation("no cell contains the tail of the ray")


def _tail_entry(cell: ConvexPolyhedron, direction: Vector) -> Fraction:
    """Smallest lam0 >= 1 with lam * direction in cell for all lam >= lam0."""
    lam0 = Fraction(1)
    for h in cell.halfspaces:
        along = h.normal.dot(direction)
        if along < 0:
            lam0 = max(lam0, h.bound / along)
    return lam0


def _off_level_point(row: AffineMap, region: ConvexPolyhedron, side: str) -> Vector:
    """A region point where the scalar row is nonzero, given it is unbounded."""
    sign = 1 if side == "max" else -1
    level = Halfspace(row.linear[0].scale(-sign), sign * row.offset[0] - 1)
    pt = feasible_point(region.with_constraints([level]))
    if pt is None:
        raise InvariantViolation("unbounded row has no off-level point")
    return pt


def _witness_on_cone(
    p: PwaMap,
    tail_cell: ConvexPolyhedron,
    region: ConvexPolyhedron,
    delta_row: AffineMap,
    extreme: Vector,
) -> HomogeneityWitness:
    """Turn a candidate disagreement at extreme into an exact violated pair.

    Needs region solid inside the cone so the probe lands on strict sign
    territory where the tail cell really hosts the ray's far end.
    """
    z = interior_point(region)
    if delta_row(z)[0] == 0:
        z = (z + extreme).scale(Fraction(1, 2))
    lam0 = _tail_entry(tail_cell, z)
    for lam in (lam0 + 1, lam0 + 2):
        w = _violation(p, z, lam)
        if w is not None:
            return w
    raise InvariantViolation("disagreement with the conic candidate did not scale")


def _conic_decision(p: PwaMap) -> Decision:
    cones = _central_cones(p)
    cells, pieces = solid_refined_pieces(p)
    cone_pieces: list[AffineMap] = []
    thin_disagreement = False
    for cone in cones:
        tail_cell, g = _ray_tail(p, interior_point(cone))
        cone_pieces.append(g)
        for cell, f in zip(cells, pieces):
            region = intersect(cone, cell)
            if is_empty(region):
                continue
            delta = affine_sub(f, g)
            for d in range(p.dim_out):
                row = delta.row(d)
                for side in ("max", "min"):
                    bound = _scalar_range(row, region, side)
                    if bound.is_optimal and bound.value == 0:
                        continue
                    if not has_interior(region):
                        thin_disagreement = True
                        break
                    extreme = (
                        _off_level_point(row, region, side)
                        if bound.is_unbounded
                        else bound.witness
                    )
                    return Decision(
                        NO,
                        witness=_witness_on_cone(p, tail_cell, region, row, extreme),
                    )
    if thin_disagreement:
        raise InvariantViolation("conic candidate disagreed only on thin overlaps")
    return Decision(YES_ON_CONIC_FORM, conic_map=PwaMap(cones, cone_pieces))


def is_piecewise_linear(p: PwaMap, samples: int = 48) -> Decision:
    """Decide P(lam x) = lam P(x) for all lam >= 0, exactly.

    Checks the presentation first (conic cells, linear pieces, P(0) = 0),
    then hunts for a violated sample pair, then settles the remaining cases
    by exact comparison with the forced conic candidate.
    """
    if _conic_presentation(p):
        return Decision(YES)
    w = _sampled_witness(p, samples)
    if w is not None:
        return Decision(NO, witness=w)
    return _conic_decision(p)


def as_pwl(p: PwaMap) -> PwlMap:
    """Wrap P after deciding homogeneity; prefers the conic presentation."""
    decision = is_piecewise_linear(p)
    if decision.verdict == NO:
        w = decision.witness
        raise InvariantViolation(
            f"map is not positively homogeneous at x={w.point!r}, lam={w.scale}"
        )
    if decision.verdict == YES_ON_CONIC_FORM:
        return PwlMap(decision.conic_map)
    return PwlMap(p)


def to_linear_forms(
    p: PwlMap,
    cone: Optional[OrderingCone] = None,
    kind: str = "minmax",
    max_members: int = FORM_CAP,
) -> MinMaxForm | MaxMinForm | DcForm:
    """Canonical form of a homogeneous map with all members linear.

    kind picks the shape: "minmax", "maxmin", or "dc". Members always come
    out with zero offsets for a correctly wrapped map; a nonzero offset means
    the wrapped map was not homogeneous and is reported as such.
    """
    if kind in ("minmax", "maxmin"):
        form = to_min_max(p.inner, cone, orientation=kind, max_members=max_members)
        families = form.groups
    elif kind == "dc":
        form = to_dc(p.inner, cone, max_members=max_members)
        families = (form.plus, form.minus)
    else:
        raise ValueError(f"unknown form kind: {kind!r}")
    for family in families:
        for member in family:
            if not member.is_linear():
                raise NonzeroOffsetProduced(
                    "form member has a nonzero offset; the wrapped map is not homogeneous"
                )
    return form
