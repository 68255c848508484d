"""Piecewise affine map algebra: validation, evaluation, vector and lattice ops."""

import random
from fractions import Fraction

import pytest

from pwacalc.errors import DimensionMismatch, NoCellFound
from pwacalc.geometry import AffineMap, Halfspace, OrderingCone, Vector, standard_cone
from pwacalc.polyhedra import ConvexPolyhedron, whole_space
from pwacalc.pwa import (
    PwaMap,
    add,
    affine_as_map,
    compose,
    coordinates,
    eval_map,
    from_coordinates,
    lattice_inf,
    lattice_sup,
    linear_combine,
    negate,
    scale,
    validate,
)

from generators import random_affine, random_pwa
from oracles import random_point, sample_points


def max_map():
    # max(x1, x2) on the two closed halfplanes split by the diagonal
    c1 = ConvexPolyhedron(2, [Halfspace([1, -1], 0)])
    c2 = ConvexPolyhedron(2, [Halfspace([-1, 1], 0)])
    return PwaMap([c1, c2], [AffineMap([[0, 1]], [0]), AffineMap([[1, 0]], [0])])


def min_map():
    c1 = ConvexPolyhedron(2, [Halfspace([1, -1], 0)])
    c2 = ConvexPolyhedron(2, [Halfspace([-1, 1], 0)])
    return PwaMap([c1, c2], [AffineMap([[1, 0]], [0]), AffineMap([[0, 1]], [0])])


def abs_map():
    c1 = ConvexPolyhedron(1, [Halfspace([1], 0)])
    c2 = ConvexPolyhedron(1, [Halfspace([-1], 0)])
    return PwaMap([c1, c2], [AffineMap([[-1]], [0]), AffineMap([[1]], [0])])


def test_validate_whole_space_single_cell():
    p = affine_as_map(AffineMap([[2, 0], [1, 1]], [1, 0]))
    report = validate(p)
    assert report.ok
    assert report.covered
    assert report.inconsistent_pairs == ()


def test_validate_max_map_passes():
    assert validate(max_map()).ok


def test_validate_flags_disagreeing_pieces():
    c1 = ConvexPolyhedron(2, [Halfspace([1, -1], 0)])
    c2 = ConvexPolyhedron(2, [Halfspace([-1, 1], 0)])
    bad = PwaMap([c1, c2], [AffineMap([[0, 1]], [0]), AffineMap([[1, 0]], [1])])
    report = validate(bad)
    assert report.covered
    assert report.inconsistent_pairs == ((0, 1),)
    assert not report.ok


def test_validate_flags_covering_gap():
    cell = ConvexPolyhedron(1, [Halfspace([-1], 0)])  # x >= 0 only
    report = validate(PwaMap([cell], [AffineMap([[1]], [0])]))
    assert not report.covered


def test_eval_hand_values():
    x = Vector([Fraction(1, 2), Fraction(3)])
    assert eval_map(max_map(), x) == Vector([3])
    assert eval_map(min_map(), x) == Vector([Fraction(1, 2)])


def test_eval_affine_map_matches_apply():
    rng = random.Random(5)
    f = random_affine(rng, 3, 2)
    p = affine_as_map(f)
    for x in sample_points(rng, 3, 25):
        assert eval_map(p, x) == f(x)


def test_eval_outside_cells_raises():
    cell = ConvexPolyhedron(1, [Halfspace([-1], 0)])
    p = PwaMap([cell], [AffineMap([[1]], [0])])
    with pytest.raises(NoCellFound):
        eval_map(p, Vector([-1]))


def test_eval_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        eval_map(max_map(), Vector([1]))


def test_linear_combine_pointwise():
    rng = random.Random(11)
    for _ in range(5):
        p, op = random_pwa(rng, 2, 2, leaves=2)
        q, oq = random_pwa(rng, 2, 2, leaves=2)
        alpha, beta = Fraction(3, 2), Fraction(-2)
        combined = linear_combine(alpha, p, beta, q)
        for x in sample_points(rng, 2, 40):
            expected = op(x).scale(alpha) + oq(x).scale(beta)
            assert eval_map(combined, x) == expected


def test_max_plus_min_is_sum():
    rng = random.Random(3)
    s = add(max_map(), min_map())
    for x in sample_points(rng, 2, 60):
        assert eval_map(s, x) == Vector([x[0] + x[1]])


def test_p_minus_p_is_zero():
    rng = random.Random(7)
    p, _ = random_pwa(rng, 2, 1, leaves=3)
    diff = linear_combine(1, p, -1, p)
    for x in sample_points(rng, 2, 30):
        assert eval_map(diff, x) == Vector([0])


def test_scale_and_negate():
    rng = random.Random(13)
    p, oracle = random_pwa(rng, 2, 2, leaves=2)
    doubled = scale(p, 2)
    flipped = negate(p)
    for x in sample_points(rng, 2, 30):
        assert eval_map(doubled, x) == oracle(x).scale(2)
        assert eval_map(flipped, x) == -oracle(x)


def test_sup_of_x_and_minus_x_is_abs():
    ident = affine_as_map(AffineMap([[1]], [0]))
    negid = affine_as_map(AffineMap([[-1]], [0]))
    sup = lattice_sup(ident, negid)
    assert eval_map(sup, Vector([-1])) == Vector([1])
    assert eval_map(sup, Vector([Fraction(3, 4)])) == Vector([Fraction(3, 4)])
    assert eval_map(sup, Vector([0])) == Vector([0])


def test_lattice_sup_pointwise_coordinatewise_max():
    rng = random.Random(17)
    for _ in range(4):
        p, op = random_pwa(rng, 2, 2, leaves=2)
        q, oq = random_pwa(rng, 2, 2, leaves=2)
        sup = lattice_sup(p, q)
        inf = lattice_inf(p, q)
        for x in sample_points(rng, 2, 30):
            pv, qv = op(x), oq(x)
            assert eval_map(sup, x) == Vector([max(a, b) for a, b in zip(pv, qv)])
            assert eval_map(inf, x) == Vector([min(a, b) for a, b in zip(pv, qv)])


def test_lattice_laws_pointwise():
    rng = random.Random(19)
    p, _ = random_pwa(rng, 2, 1, leaves=2)
    q, _ = random_pwa(rng, 2, 1, leaves=2)
    r, _ = random_pwa(rng, 2, 1, leaves=2)
    idem = lattice_sup(p, p)
    comm_a, comm_b = lattice_sup(p, q), lattice_sup(q, p)
    assoc_a = lattice_sup(lattice_sup(p, q), r)
    assoc_b = lattice_sup(p, lattice_sup(q, r))
    for x in sample_points(rng, 2, 25):
        assert eval_map(idem, x) == eval_map(p, x)
        assert eval_map(comm_a, x) == eval_map(comm_b, x)
        assert eval_map(assoc_a, x) == eval_map(assoc_b, x)


def test_sup_plus_inf_absorption():
    rng = random.Random(23)
    p, _ = random_pwa(rng, 2, 2, leaves=2)
    q, _ = random_pwa(rng, 2, 2, leaves=2)
    left = add(lattice_sup(p, q), lattice_inf(p, q))
    right = add(p, q)
    for x in sample_points(rng, 2, 30):
        assert eval_map(left, x) == eval_map(right, x)


def test_lattice_sup_in_skewed_cone():
    rng = random.Random(29)
    cone = OrderingCone([[1, 0], [1, 1]])
    p, op = random_pwa(rng, 2, 2, leaves=2)
    q, oq = random_pwa(rng, 2, 2, leaves=2)
    sup = lattice_sup(p, q, cone)
    inf = lattice_inf(p, q, cone)
    for x in sample_points(rng, 2, 30):
        assert eval_map(sup, x) == cone.sup_point(op(x), oq(x))
        assert eval_map(inf, x) == cone.inf_point(op(x), oq(x))


def test_lattice_dim_mismatch():
    p = affine_as_map(AffineMap([[1, 0]], [0]))
    q = affine_as_map(AffineMap([[1]], [0]))
    with pytest.raises(DimensionMismatch):
        lattice_sup(p, q)


def test_compose_with_identity():
    rng = random.Random(31)
    p, oracle = random_pwa(rng, 2, 2, leaves=2)
    ident = affine_as_map(AffineMap([[1, 0], [0, 1]], [0, 0]))
    left = compose(ident, p)
    right = compose(p, ident)
    for x in sample_points(rng, 2, 25):
        assert eval_map(left, x) == oracle(x)
        assert eval_map(right, x) == oracle(x)


def test_compose_clamp_of_max():
    # Q(t) = min(t, 1) applied after max(x1, x2)
    q = PwaMap(
        [ConvexPolyhedron(1, [Halfspace([1], 1)]), ConvexPolyhedron(1, [Halfspace([-1], -1)])],
        [AffineMap([[1]], [0]), AffineMap([[0]], [1])],
    )
    c = compose(q, max_map())
    assert eval_map(c, Vector([2, 0])) == Vector([1])
    assert eval_map(c, Vector([Fraction(1, 2), 0])) == Vector([Fraction(1, 2)])


def test_compose_pointwise_and_cell_bound():
    rng = random.Random(37)
    for _ in range(4):
        p, op = random_pwa(rng, 2, 2, leaves=2)
        q, oq = random_pwa(rng, 2, 2, leaves=2)
        c = compose(q, p)
        assert len(c.cells) <= len(p.cells) * len(q.cells)
        for x in sample_points(rng, 2, 25):
            assert eval_map(c, x) == oq(op(x))


def test_compose_dim_mismatch():
    p = affine_as_map(AffineMap([[1, 0]], [0]))  # R^2 -> R
    q = affine_as_map(AffineMap([[1, 0], [0, 1]], [0, 0]))  # R^2 -> R^2
    with pytest.raises(DimensionMismatch):
        compose(q, p)


def test_coordinates_of_identity():
    ident = affine_as_map(AffineMap([[1, 0], [0, 1]], [0, 0]))
    cs = coordinates(ident)
    assert len(cs) == 2
    assert eval_map(cs[0], Vector([3, 4])) == Vector([3])
    assert eval_map(cs[1], Vector([3, 4])) == Vector([4])


def test_coordinates_of_constant():
    const = affine_as_map(AffineMap([[0, 0], [0, 0]], [Fraction(5), Fraction(-2, 3)]))
    cs = coordinates(const)
    x = Vector([7, 9])
    assert eval_map(cs[0], x) == Vector([5])
    assert eval_map(cs[1], x) == Vector([Fraction(-2, 3)])


def test_coordinate_round_trip():
    rng = random.Random(41)
    p, oracle = random_pwa(rng, 2, 2, leaves=2)
    back = from_coordinates(coordinates(p))
    for x in sample_points(rng, 2, 40):
        assert eval_map(back, x) == oracle(x)


def test_coordinate_round_trip_skewed_cone():
    rng = random.Random(43)
    cone = OrderingCone([[2, 1], [0, 1]])
    p, oracle = random_pwa(rng, 2, 2, leaves=2)
    back = from_coordinates(coordinates(p, cone), cone)
    for x in sample_points(rng, 2, 30):
        assert eval_map(back, x) == oracle(x)


def test_constructor_rejects_bad_shapes():
    cell = whole_space(2)
    with pytest.raises(DimensionMismatch):
        PwaMap([], [])
    with pytest.raises(DimensionMismatch):
        PwaMap([cell], [AffineMap([[1]], [0])])  # piece has dim_in 1
    with pytest.raises(DimensionMismatch):
        PwaMap([cell], [AffineMap([[1, 0]], [0]), AffineMap([[0, 1]], [0])])
