"""Exact linear programming over the rationals.

A two-phase primal simplex on a dense Fraction tableau. Bland's smallest-index
rule is used for both the entering and the leaving variable, which rules out
cycling, so termination is unconditional. Free variables are handled by the
classic split x = u - v with u, v >= 0.

The solver is deliberately small and boring: every geometric predicate in the
package (emptiness, containment, interiors, implicit equalities) reduces to
calls into this module, so it favours being obviously correct over being fast.
Problem sizes stay modest (tens of variables and constraints).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatch
from .geometry import Halfspace, Vector

INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
OPTIMAL = "optimal"


@dataclass(frozen=True)
class LpResult:
    """Outcome of solve_lp.

    status is one of "infeasible", "unbounded", "optimal"; value and witness
    are set only for optimal results. For unbounded problems the objective is
    unbounded in the requested direction over a nonempty feasible set.
    """

    status: str
    value: Optional[Fraction] = None
    witness: Optional[Vector] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL

    @property
    def is_infeasible(self) -> bool:
        return self.status == INFEASIBLE

    @property
    def is_unbounded(self) -> bool:
        return self.status == UNBOUNDED


def solve_lp(objective: Vector, constraints: Sequence[Halfspace], direction: str = "max") -> LpResult:
    """Optimize objective . x over {x : h.normal . x <= h.bound for all h}.

    Variables are free; direction is "max" or "min". Exact rational arithmetic
    throughout, so returned values and witnesses are exact.
    """
    if direction not in ("max", "min"):
        raise ValueError(f"direction must be 'max' or 'min', got {direction!r}")
    n = objective.dim
    for h in constraints:
        if h.dim != n:
            raise DimensionMismatch(f"constraint dim {h.dim} vs objective dim {n}")
    sign = Fraction(1) if direction == "max" else Fraction(-1)
    obj = [sign * c for c in objective.coords]

    rows = []
    for h in constraints:
        if h.normal.is_zero():
            if h.bound < 0:
                return LpResult(INFEASIBLE)
            continue  # trivially satisfied, keep the tableau small
        rows.append((list(h.normal.coords), h.bound))

    witness, value = _simplex(n, rows, obj)
    if witness is None:
        return LpResult(INFEASIBLE) if value is None else LpResult(UNBOUNDED)
    return LpResult(OPTIMAL, sign * value, Vector(witness))


def _simplex(n: int, rows: list[tuple[list[Fraction], Fraction]], obj: list[Fraction]):
    """Maximize obj . x subject to rows; x free via the u - v split.

    Returns (witness, value) on optimality, (None, Fraction(0)) when
    unbounded, (None, None) when infeasible.
    """
    m = len(rows)
    zero = Fraction(0)
    one = Fraction(1)
    # Columns: u_0..u_{n-1}, v_0..v_{n-1}, slack_0..slack_{m-1}, artificials.
    ncols = 2 * n + m
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    artificial_rows = []
    for i, (a, b) in enumerate(rows):
        row = [zero] * ncols
        for j in range(n):
            row[j] = a[j]
            row[n + j] = -a[j]
        row[2 * n + i] = one
        if b < 0:
            row = [-x for x in row]
            b = -b
            artificial_rows.append(i)
        row.append(b)
        tableau.append(row)
        basis.append(2 * n + i)

    n_art = len(artificial_rows)
    if n_art:
        for k, i in enumerate(artificial_rows):
            for r in range(m):
                tableau[r].insert(ncols + k, one if r == i else zero)
            basis[i] = ncols + k
        ncols += n_art
        # Phase 1: maximize -(sum of artificials).
        phase1 = [zero] * ncols
        for k in range(n_art):
            phase1[ncols - n_art + k] = -one
        zrow = _cost_row(tableau, basis, phase1, ncols)
        status = _run(tableau, basis, zrow, ncols)
        if status != OPTIMAL:  # phase 1 objective is bounded above by 0
            return None, None
        if -zrow[-1] != 0:
            return None, None
        _drive_out_artificials(tableau, basis, ncols, ncols - n_art)
        # Drop artificial columns; any row still basic in one is redundant.
        keep_rows = [r for r in range(len(tableau)) if basis[r] < ncols - n_art]
        tableau = [[tableau[r][c] for c in range(ncols - n_art)] + [tableau[r][-1]] for r in keep_rows]
        basis = [basis[r] for r in keep_rows]
        ncols -= n_art

    phase2 = [zero] * ncols
    for j in range(n):
        phase2[j] = obj[j]
        phase2[n + j] = -obj[j]
    zrow = _cost_row(tableau, basis, phase2, ncols)
    status = _run(tableau, basis, zrow, ncols)
    if status == UNBOUNDED:
        return None, Fraction(0)
    x = _extract(tableau, basis, n)
    return x, -zrow[-1]


def _cost_row(tableau, basis, cost, ncols) -> list[Fraction]:
    """Reduced costs for the current basis, with -(objective value) last.

    Stored alongside the tableau and updated in each pivot like any other row,
    which keeps entering-column selection O(columns).
    """
    zero = Fraction(0)
    row = list(cost) + [zero]
    for i, b in enumerate(basis):
        cb = cost[b]
        if cb != 0:
            trow = tableau[i]
            row = [x - cb * y for x, y in zip(row, trow)]
    return row


def _run(tableau, basis, zrow, ncols) -> str:
    """Simplex iterations with Bland's rule; returns OPTIMAL or UNBOUNDED."""
    while True:
        entering = -1
        for j in range(ncols):
            if zrow[j] > 0:
                entering = j
                break
        if entering < 0:
            return OPTIMAL
        leaving = -1
        best = None
        for i in range(len(tableau)):
            coef = tableau[i][entering]
            if coef > 0:
                ratio = tableau[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving < 0:
            return UNBOUNDED
        _pivot(tableau, basis, leaving, entering, zrow)


def _pivot(tableau, basis, row, col, zrow=None) -> None:
    inv = 1 / tableau[row][col]
    tableau[row] = [x * inv if x else x for x in tableau[row]]
    pivot_row = tableau[row]
    for r in range(len(tableau)):
        if r != row and tableau[r][col] != 0:
            f = tableau[r][col]
            tableau[r] = [x - f * y if y else x for x, y in zip(tableau[r], pivot_row)]
    if zrow is not None and zrow[col] != 0:
        f = zrow[col]
        zrow[:] = [x - f * y if y else x for x, y in zip(zrow, pivot_row)]
    basis[row] = col


def _drive_out_artificials(tableau, basis, ncols, first_artificial) -> None:
    for i in range(len(tableau)):
        if basis[i] >= first_artificial:
            col = next((j for j in range(first_artificial) if tableau[i][j] != 0), None)
            if col is not None:
                _pivot(tableau, basis, i, col)


def _extract(tableau, basis, n) -> list[Fraction]:
    vals = {b: tableau[i][-1] for i, b in enumerate(basis)}
    return [vals.get(j, Fraction(0)) - vals.get(n + j, Fraction(0)) for j in range(n)]


def strict_feasible(
    strict: Sequence[Halfspace],
    weak: Sequence[Halfspace] = (),
    equalities: Sequence[Halfspace] = (),
    dim: Optional[int] = None,
) -> bool:
    """Exact test for a point satisfying all strict rows strictly.

    strict rows are required with <, weak rows with <=, equality rows with =.
    Decided by maximizing a slack t subject to normal . x + t <= bound on the
    strict rows (t capped at 1 so the program is never unbounded); feasible
    iff the optimum is positive.
    """
    return strict_witness(strict, weak, equalities, dim) is not None


def strict_witness(
    strict: Sequence[Halfspace],
    weak: Sequence[Halfspace] = (),
    equalities: Sequence[Halfspace] = (),
    dim: Optional[int] = None,
) -> Optional[Vector]:
    """A rational point witnessing strict_feasible, or None.

    dim is required when all three constraint lists are empty (the system then
    describes the whole space of that dimension).
    """
    dims = {h.dim for h in (*strict, *weak, *equalities)}
    if dim is not None:
        dims.add(dim)
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed constraint dims {sorted(dims)}")
    if not dims:
        raise DimensionMismatch("empty system needs an explicit dim")
    n = dims.pop()

    rows: list[Halfspace] = []

    def lift(h: Halfspace, t_coef: int) -> Halfspace:
        return Halfspace(list(h.normal.coords) + [Fraction(t_coef)], h.bound)

    for h in strict:
        if h.normal.is_zero():
            if h.bound <= 0:
                return None  # 0 < bound required
            continue
        rows.append(lift(h, 1))
    for h in weak:
        if h.normal.is_zero():
            if h.bound < 0:
                return None
            continue
        rows.append(lift(h, 0))
    for h in equalities:
        if h.normal.is_zero():
            if h.bound != 0:
                return None
            continue
        rows.append(lift(h, 0))
        rows.append(lift(h.flipped(), 0))
    rows.append(Halfspace([Fraction(0)] * n + [Fraction(1)], Fraction(1)))  # t <= 1

    objective = Vector([Fraction(0)] * n + [Fraction(1)])
    result = solve_lp(objective, rows, "max")
    if not result.is_optimal or result.value <= 0:
        return None
    return Vector(result.witness.coords[:n])
