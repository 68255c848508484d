"""Convex polyhedra and finite unions of them, with exact predicates.

A ConvexPolyhedron is a finite intersection of closed halfspaces; an empty
halfspace list means the whole space. A PolyhedralSet is a finite union of
convex polyhedra (disjunctive form); a CnfPolyhedralSet is an intersection of
clauses, each clause a finite union of halfspaces (conjunctive form). All
predicates reduce to exact rational LPs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, EmptyPolyhedron
from .geometry import AffineMap, Halfspace, Vector, halfspace_preimage, mat_rank
from .lp import solve_lp, strict_witness


@dataclass(frozen=True)
class ConvexPolyhedron:
    """Intersection of closed halfspaces in a fixed ambient dimension."""

    dim: int
    halfspaces: tuple[Halfspace, ...]

    def __init__(self, dim: int, halfspaces: Iterable[Halfspace] = ()):
        hs = tuple(halfspaces)
        if dim < 0:
            raise DimensionMismatch("dimension must be nonnegative")
        for h in hs:
            if h.dim != dim:
                raise DimensionMismatch(f"halfspace dim {h.dim} in ambient dim {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "halfspaces", hs)

    def contains(self, x: Vector) -> bool:
        if x.dim != self.dim:
            raise DimensionMismatch(f"point dim {x.dim} vs ambient {self.dim}")
        return all(h.contains(x) for h in self.halfspaces)

    def with_constraints(self, extra: Iterable[Halfspace]) -> "ConvexPolyhedron":
        return ConvexPolyhedron(self.dim, self.halfspaces + tuple(extra))


def whole_space(dim: int) -> ConvexPolyhedron:
    return ConvexPolyhedron(dim, ())


def intersect(p: ConvexPolyhedron, q: ConvexPolyhedron) -> ConvexPolyhedron:
    if p.dim != q.dim:
        raise DimensionMismatch(f"ambient dims {p.dim} and {q.dim} differ")
    return ConvexPolyhedron(p.dim, p.halfspaces + q.halfspaces)


@lru_cache(maxsize=65536)
def is_empty(p: ConvexPolyhedron) -> bool:
    """Exact emptiness via LP feasibility with a zero objective."""
    result = solve_lp(Vector([Fraction(0)] * p.dim), p.halfspaces, "max")
    return result.is_infeasible


@lru_cache(maxsize=65536)
def feasible_point(p: ConvexPolyhedron) -> Optional[Vector]:
    result = solve_lp(Vector([Fraction(0)] * p.dim), p.halfspaces, "max")
    return result.witness if result.is_optimal else None


@lru_cache(maxsize=65536)
def interior_point(p: ConvexPolyhedron) -> Optional[Vector]:
    """A point satisfying every constraint strictly, or None."""
    return strict_witness(p.halfspaces, dim=p.dim)


def has_interior(p: ConvexPolyhedron) -> bool:
    return interior_point(p) is not None


def preimage(p: ConvexPolyhedron, f: AffineMap) -> ConvexPolyhedron:
    """{x : f(x) in p} over the domain of f."""
    if p.dim != f.dim_out:
        raise DimensionMismatch(f"polyhedron dim {p.dim} vs map codomain {f.dim_out}")
    return ConvexPolyhedron(f.dim_in, tuple(halfspace_preimage(h, f) for h in p.halfspaces))


@lru_cache(maxsize=65536)
def contained_in_halfspace(p: ConvexPolyhedron, h: Halfspace) -> bool:
    """p subset of h, decided by maximizing the normal over p."""
    if p.dim != h.dim:
        raise DimensionMismatch(f"ambient dims {p.dim} and {h.dim} differ")
    result = solve_lp(h.normal, p.halfspaces, "max")
    if result.is_infeasible:
        return True
    if result.is_unbounded:
        return False
    return result.value <= h.bound


def contained_in(p: ConvexPolyhedron, q: ConvexPolyhedron) -> bool:
    return all(contained_in_halfspace(p, h) for h in q.halfspaces)


@lru_cache(maxsize=65536)
def _affine_hull(p: ConvexPolyhedron) -> tuple[tuple[Halfspace, ...], int]:
    if is_empty(p):
        raise EmptyPolyhedron("affine hull of the empty set")
    equalities: list[Halfspace] = []
    for h in p.halfspaces:
        if h.normal.is_zero():
            continue
        result = solve_lp(h.normal, p.halfspaces, "min")
        if result.is_optimal and result.value == h.bound:
            equalities.append(h)
    rank = mat_rank([list(h.normal.coords) for h in equalities]) if equalities else 0
    return tuple(equalities), p.dim - rank


def affine_hull(p: ConvexPolyhedron) -> tuple[list[Halfspace], int]:
    """Implicit equality rows of p and the dimension of its affine hull.

    A constraint normal . x <= bound is an implicit equality when the minimum
    of normal . x over p equals the bound. The hull dimension is the ambient
    dimension minus the rank of the implicit-equality normals. Raises
    EmptyPolyhedron on empty input.
    """
    equalities, dim = _affine_hull(p)
    return list(equalities), dim


def implicit_split(p: ConvexPolyhedron) -> tuple[list[Halfspace], list[Halfspace]]:
    """(implicit equalities, remaining constraints) of a nonempty polyhedron."""
    equalities, _ = _affine_hull(p)
    eq_keys = {(h.normal.coords, h.bound) for h in equalities}
    rest = [
        h
        for h in p.halfspaces
        if not h.normal.is_zero() and (h.normal.coords, h.bound) not in eq_keys
    ]
    return list(equalities), rest


def relative_interior_point(p: ConvexPolyhedron) -> Vector:
    """An exact point in the relative interior of a nonempty polyhedron."""
    equalities, rest = implicit_split(p)
    w = strict_witness(rest, (), equalities, dim=p.dim)
    if w is None:
        raise EmptyPolyhedron("no relative interior point found")
    return w


def relative_interiors_intersect(p: ConvexPolyhedron, q: ConvexPolyhedron) -> bool:
    """Exact test for ri(p) and ri(q) sharing a point; inputs nonempty."""
    if p.dim != q.dim:
        raise DimensionMismatch(f"ambient dims {p.dim} and {q.dim} differ")
    if is_empty(p) or is_empty(q):
        raise EmptyPolyhedron("relative interiors of empty sets are undefined")
    eq_p, rest_p = implicit_split(p)
    eq_q, rest_q = implicit_split(q)
    return strict_witness(rest_p + rest_q, (), eq_p + eq_q, dim=p.dim) is not None


def remove_redundancy(p: ConvexPolyhedron) -> ConvexPolyhedron:
    """Drop constraints implied by the others (and trivial rows).

    Result describes the same set. On an empty input the constraint list is
    left as-is apart from trivial-row cleanup.
    """
    rows = [h for h in p.halfspaces if not h.is_trivial()]
    if any(h.is_infeasible() for h in rows) or is_empty(ConvexPolyhedron(p.dim, rows)):
        return ConvexPolyhedron(p.dim, rows)
    kept = list(rows)
    i = 0
    while i < len(kept):
        candidate = kept[i]
        others = kept[:i] + kept[i + 1 :]
        if contained_in_halfspace(ConvexPolyhedron(p.dim, others), candidate):
            kept = others
        else:
            i += 1
    return ConvexPolyhedron(p.dim, kept)


def eliminate_variable(halfspaces: Sequence[Halfspace], index: int) -> list[Halfspace]:
    """Fourier-Motzkin elimination of one coordinate.

    Returns constraints over the remaining coordinates (index dropped) whose
    solution set is the projection. Exact; may grow quadratically.
    """
    keep: list[Halfspace] = []
    pos: list[Halfspace] = []
    neg: list[Halfspace] = []
    for h in halfspaces:
        c = h.normal[index]
        if c == 0:
            keep.append(h)
        elif c > 0:
            pos.append(h)
        else:
            neg.append(h)

    def drop(v: Vector) -> Vector:
        return Vector([c for i, c in enumerate(v.coords) if i != index])

    out = [Halfspace(drop(h.normal), h.bound) for h in keep]
    for hp in pos:
        cp = hp.normal[index]
        for hn in neg:
            cn = hn.normal[index]
            # cp > 0, cn < 0; positive combination cancelling the coordinate.
            normal = hp.normal.scale(-cn) + hn.normal.scale(cp)
            bound = -cn * hp.bound + cp * hn.bound
            out.append(Halfspace(drop(normal), bound))
    return out


def project_out(p: ConvexPolyhedron, indices: Sequence[int], tidy: bool = True) -> ConvexPolyhedron:
    """Project away the given coordinates (Fourier-Motzkin, exact)."""
    rows: Sequence[Halfspace] = p.halfspaces
    dim = p.dim
    for index in sorted(indices, reverse=True):
        rows = eliminate_variable(rows, index)
        dim -= 1
        if tidy:
            rows = remove_redundancy(ConvexPolyhedron(dim, rows)).halfspaces
    return ConvexPolyhedron(dim, tuple(rows))


@dataclass(frozen=True)
class PolyhedralSet:
    """Finite union of convex polyhedra (disjunctive form)."""

    dim: int
    pieces: tuple[ConvexPolyhedron, ...]

    def __init__(self, dim: int, pieces: Iterable[ConvexPolyhedron] = ()):
        ps = tuple(pieces)
        for piece in ps:
            if piece.dim != dim:
                raise DimensionMismatch(f"piece dim {piece.dim} in ambient dim {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "pieces", ps)

    def contains(self, x: Vector) -> bool:
        return any(piece.contains(x) for piece in self.pieces)


@dataclass(frozen=True)
class CnfPolyhedralSet:
    """Intersection of clauses, each clause a union of halfspaces."""

    dim: int
    clauses: tuple[tuple[Halfspace, ...], ...]

    def __init__(self, dim: int, clauses: Iterable[Iterable[Halfspace]] = ()):
        cl = tuple(tuple(c) for c in clauses)
        for clause in cl:
            for h in clause:
                if h.dim != dim:
                    raise DimensionMismatch(f"halfspace dim {h.dim} in ambient dim {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "clauses", cl)

    def contains(self, x: Vector) -> bool:
        return all(any(h.contains(x) for h in clause) for clause in self.clauses)


def _halfspace_key(h: Halfspace) -> tuple:
    return tuple((c.numerator, c.denominator) for c in h.normal.coords) + (
        h.bound.numerator,
        h.bound.denominator,
    )


def dnf_to_cnf(s: PolyhedralSet) -> CnfPolyhedralSet:
    """Distribute a union of intersections into an intersection of unions.

    One clause per way of choosing a halfspace from each piece. Empty pieces
    are pruned first (they contribute nothing to the union); a piece with no
    constraints makes the whole set trivial, giving zero clauses. Clauses are
    deduplicated syntactically after canonical sorting. With no pieces left
    the result is the single empty clause, i.e. the empty set.
    """
    live = [p for p in s.pieces if not is_empty(p)]
    if any(not p.halfspaces for p in live):
        return CnfPolyhedralSet(s.dim, ())
    clauses: list[tuple[Halfspace, ...]] = [()]
    for piece in live:
        clauses = [clause + (h,) for clause in clauses for h in piece.halfspaces]
    seen = set()
    unique: list[tuple[Halfspace, ...]] = []
    for clause in clauses:
        canon = tuple(sorted(clause, key=_halfspace_key))
        key = tuple(_halfspace_key(h) for h in canon)
        if key not in seen:
            seen.add(key)
            unique.append(canon)
    return CnfPolyhedralSet(s.dim, unique)


def union_contains(pieces: Sequence[ConvexPolyhedron], target: ConvexPolyhedron) -> bool:
    """Exact test for target subset of the union of pieces.

    Branches over which constraint of each piece a hypothetical outside point
    violates strictly; a branch that stays feasible past every piece exhibits
    a point of target outside the union. Strict feasibility is exact, so the
    test is exact. Prunes fast when target sits inside few pieces.
    """
    if any(p.dim != target.dim for p in pieces):
        raise DimensionMismatch("pieces and target have different ambient dims")
    weak = tuple(target.halfspaces)

    def branch(strict: list[Halfspace], idx: int) -> bool:
        # True when the current region (target + strict rows) is covered.
        if strict_witness(strict, weak, dim=target.dim) is None:
            return True
        while idx < len(pieces):
            piece = pieces[idx]
            if not piece.halfspaces:
                return True  # piece is the whole space
            # A piece meeting the region nowhere cannot help cover it.
            if strict_witness(strict, weak + piece.halfspaces, dim=target.dim) is not None:
                break
            idx += 1
        if idx == len(pieces):
            return False
        return all(branch(strict + [h.flipped()], idx + 1) for h in pieces[idx].halfspaces)

    return branch([], 0)
