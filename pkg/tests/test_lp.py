"""Exact simplex kernel against independent oracles.

Optimal values are confirmed by brute-force vertex enumeration, feasibility by
a from-scratch Fourier-Motzkin eliminator; witnesses are always re-checked
against every constraint directly.
"""

import random
from fractions import Fraction

from pwacalc.geometry import Halfspace, Vector
from pwacalc.lp import solve_lp, strict_feasible, strict_witness

from oracles import enumerate_vertices, fm_feasible, random_point, random_rational


def box(dim, lo, hi):
    rows = []
    for i in range(dim):
        e = [0] * dim
        e[i] = 1
        rows.append(Halfspace(e, hi))
        e2 = [0] * dim
        e2[i] = -1
        rows.append(Halfspace(e2, -lo))
    return rows


def test_hand_cases():
    r = solve_lp(Vector([1]), [Halfspace([1], 2)], "max")
    assert r.is_optimal and r.value == 2 and r.witness == Vector([2])

    r = solve_lp(Vector([1]), [Halfspace([1], 2)], "min")
    assert r.is_unbounded

    r = solve_lp(Vector([1]), [Halfspace([1], -1), Halfspace([-1], -2)], "max")
    assert r.is_infeasible  # x <= -1 and x >= 2

    r = solve_lp(Vector([0, 0]), [], "max")
    assert r.is_optimal and r.value == 0

    r = solve_lp(Vector([1, 0]), [], "max")
    assert r.is_unbounded

    # Degenerate zero-normal rows.
    assert solve_lp(Vector([1]), [Halfspace([0], -1)], "max").is_infeasible
    r = solve_lp(Vector([1]), [Halfspace([0], 1), Halfspace([1], 3)], "max")
    assert r.is_optimal and r.value == 3


def test_exact_fractional_optimum():
    # max x + y s.t. 2x + 3y <= 7, x <= 1/2, y <= 2 and a redundant row.
    rows = [
        Halfspace([2, 3], 7),
        Halfspace([1, 0], "1/2"),
        Halfspace([0, 1], 2),
        Halfspace([1, 1], 100),
    ]
    r = solve_lp(Vector([1, 1]), rows, "max")
    assert r.is_optimal and r.value == Fraction(5, 2)
    assert all(h.contains(r.witness) for h in rows)


def test_against_vertex_enumeration():
    rng = random.Random(20260818)
    agreements = 0
    for _ in range(120):
        dim = rng.choice([1, 2, 3])
        rows = [
            Halfspace(random_point(rng, dim, -3, 3, 2), random_rational(rng, -3, 3, 2))
            for _ in range(rng.randint(1, 6))
        ]
        rows += box(dim, -8, 8)  # bound the region so the optimum is at a vertex
        obj = random_point(rng, dim, -3, 3, 2)
        r = solve_lp(obj, rows, "max")
        feasible = fm_feasible(rows, dim)
        assert r.is_infeasible == (not feasible)
        if r.is_infeasible:
            continue
        assert r.is_optimal  # boxed, so never unbounded
        assert all(h.contains(r.witness) for h in rows)
        vertices = enumerate_vertices(rows, dim)
        assert vertices, "bounded nonempty region must have a vertex"
        best = max(obj.dot(v) for v in vertices)
        assert r.value == best
        agreements += 1
    assert agreements > 40


def test_unbounded_detection_against_oracle():
    rng = random.Random(7)
    for _ in range(60):
        dim = rng.choice([1, 2])
        rows = [
            Halfspace(random_point(rng, dim, -2, 2, 1), random_rational(rng, -2, 2, 1))
            for _ in range(rng.randint(1, 4))
        ]
        obj = random_point(rng, dim, -2, 2, 1)
        r = solve_lp(obj, rows, "max")
        assert r.is_infeasible == (not fm_feasible(rows, dim))
        if r.is_optimal:
            assert all(h.contains(r.witness) for h in rows)
            # No sampled feasible point may beat the reported optimum.
            for _ in range(200):
                x = random_point(rng, dim, -9, 9, 3)
                if all(h.contains(x) for h in rows):
                    assert obj.dot(x) <= r.value
        elif r.is_unbounded:
            # A ray certificate must exist: some feasible points beat any bound.
            beaten = 0
            for _ in range(4000):
                x = random_point(rng, dim, -40, 40, 1)
                if all(h.contains(x) for h in rows) and obj.dot(x) > 20:
                    beaten += 1
            assert beaten > 0


def test_min_matches_negated_max():
    rng = random.Random(99)
    for _ in range(40):
        dim = 2
        rows = [
            Halfspace(random_point(rng, dim, -2, 2, 1), random_rational(rng, 0, 3, 1))
            for _ in range(4)
        ] + box(dim, -5, 5)
        obj = random_point(rng, dim, -2, 2, 1)
        lo = solve_lp(obj, rows, "min")
        hi = solve_lp(Vector([-c for c in obj.coords]), rows, "max")
        assert lo.status == hi.status
        if lo.is_optimal:
            assert lo.value == -hi.value


def test_strict_feasible_boundaries():
    # x < 0 and x > 0 is infeasible, x < 1 and x > 0 is feasible.
    lt0 = Halfspace([1], 0)
    gt0 = Halfspace([-1], 0)
    assert not strict_feasible([lt0, gt0])
    assert strict_feasible([Halfspace([1], 1), gt0])
    # Weak rows may sit on their boundary while strict rows may not.
    assert strict_feasible([lt0], [Halfspace([-1], 0)]) is False
    assert strict_feasible([], [lt0], dim=1)
    # Equalities pin coordinates exactly.
    w = strict_witness([Halfspace([1, 0], 1)], [], [Halfspace([0, 1], "1/3")])
    assert w is not None and w[1] == Fraction(1, 3) and w[0] < 1
    # Interior of a thin slab exists; of a hyperplane it does not.
    assert strict_feasible([Halfspace([1, 1], 1), Halfspace([-1, -1], 1)])
    assert not strict_feasible([Halfspace([1, 1], 0), Halfspace([-1, -1], 0)])


def test_strict_feasible_matches_sampling():
    rng = random.Random(41)
    for _ in range(50):
        dim = 2
        strict = [
            Halfspace(random_point(rng, dim, -2, 2, 1), random_rational(rng, -1, 2, 1))
            for _ in range(rng.randint(1, 4))
        ]
        got = strict_feasible(strict)
        found = any(
            all(h.normal.dot(x) < h.bound for h in strict)
            for x in (random_point(rng, dim, -6, 6, 5) for _ in range(400))
        )
        if found:
            assert got  # sampling can only prove feasibility, never refute it
