import random
from fractions import Fraction

import pytest

from pwacalc.covering import Covering
from pwacalc.errors import MalformedInput
from pwacalc.forms import (
    CommonFamily,
    DcForm,
    MaxMinForm,
    MaxOfAffine,
    MinMaxForm,
    eval_form,
    to_common_family,
    to_dc,
    to_min_max,
)
from pwacalc.geometry import AffineMap, Halfspace, OrderingCone, Vector, standard_cone
from pwacalc.polyhedra import ConvexPolyhedron, PolyhedralSet, whole_space
from pwacalc.pwa import PwaMap, eval_map
from pwacalc.serialize import (
    covering_from_data,
    covering_to_data,
    detect_kind,
    dumps,
    form_from_data,
    form_to_data,
    loads,
    polyhedron_from_data,
    polyhedron_to_data,
    polyset_from_data,
    polyset_to_data,
    pwa_from_data,
    pwa_to_data,
)

from generators import random_pwa
from oracles import sample_points


def half(coeffs, alpha):
    return Halfspace(Vector(coeffs), Fraction(alpha))


def abs_map():
    left = ConvexPolyhedron(1, [half([1], 0)])
    right = ConvexPolyhedron(1, [half([-1], 0)])
    return PwaMap(
        [left, right],
        [AffineMap([[-1]], Vector([0])), AffineMap([[1]], Vector([0]))],
    )


def test_polyhedron_round_trip_is_canonical():
    p = ConvexPolyhedron(2, [half([1, 2], 3), half([-1, 0], 0), half([0, 1], "7/2")])
    text = dumps(polyhedron_to_data(p))
    again = polyhedron_from_data(loads(text))
    assert dumps(polyhedron_to_data(again)) == text
    assert set(again.halfspaces) == set(p.halfspaces)


def test_halfspace_order_does_not_change_bytes():
    rows = [half([1, 0], 1), half([0, 1], 2), half([-1, -1], 0)]
    a = ConvexPolyhedron(2, rows)
    b = ConvexPolyhedron(2, rows[::-1])
    assert dumps(polyhedron_to_data(a)) == dumps(polyhedron_to_data(b))


def test_whole_space_serializes_empty_list():
    data = polyhedron_to_data(whole_space(3))
    assert data == {"dim": 3, "halfspaces": []}
    assert polyhedron_from_data(data).halfspaces == ()


def test_polyset_round_trip():
    s = PolyhedralSet(
        1,
        [ConvexPolyhedron(1, [half([1], 0)]), ConvexPolyhedron(1, [half([-1], -2)])],
    )
    again = polyset_from_data(polyset_to_data(s))
    assert again.dim == 1
    assert {p.halfspaces for p in again.pieces} == {p.halfspaces for p in s.pieces}
    assert dumps(polyset_to_data(again)) == dumps(polyset_to_data(s))


def test_covering_round_trip():
    c = Covering(
        whole_space(1),
        [ConvexPolyhedron(1, [half([1], 0)]), ConvexPolyhedron(1, [half([-1], 0)])],
    )
    again = covering_from_data(covering_to_data(c))
    assert again.ambient == c.ambient
    assert set(again.cells) == set(c.cells)


def test_pwa_round_trip_pointwise():
    rng = random.Random(11)
    for seed in range(5):
        p, oracle = random_pwa(random.Random(seed), 2, 2, leaves=3)
        again = pwa_from_data(loads(dumps(pwa_to_data(p))))
        assert (again.dim_in, again.dim_out) == (p.dim_in, p.dim_out)
        for x in sample_points(rng, 2, 25):
            assert eval_map(again, x) == eval_map(p, x)
        assert dumps(pwa_to_data(again)) == dumps(pwa_to_data(p))


def test_pwa_cell_piece_pairing_survives_sorting():
    p = abs_map()
    again = pwa_from_data(pwa_to_data(p))
    assert eval_map(again, Vector([-3])) == Vector([3])
    assert eval_map(again, Vector([2])) == Vector([2])


def test_pwl_flag():
    data = pwa_to_data(abs_map(), pwl=True)
    assert data["pwl"] is True
    assert "pwl" not in pwa_to_data(abs_map())
    # loading ignores the annotation
    assert eval_map(pwa_from_data(data), Vector([-1])) == Vector([1])


def form_fixtures():
    rng = random.Random(4)
    p, _ = random_pwa(rng, 2, 1, leaves=3)
    cone = standard_cone(1)
    minmax = to_min_max(p)
    maxmin = MaxMinForm(minmax.groups, cone)
    dc = to_dc(p)
    common = to_common_family(p)
    members = tuple(m for g in minmax.groups for m in g)
    return [MaxOfAffine(members, cone), minmax, maxmin, dc, common]


def test_form_round_trips_evaluate_equal():
    rng = random.Random(9)
    points = sample_points(rng, 2, 20)
    for form in form_fixtures():
        again = form_from_data(loads(dumps(form_to_data(form))))
        assert type(again) is type(form)
        for x in points:
            assert eval_form(again, x) == eval_form(form, x)
        assert dumps(form_to_data(again)) == dumps(form_to_data(form))


def test_standard_cone_serializes_null():
    form = form_fixtures()[0]
    assert form_to_data(form)["cone"] is None


def test_skewed_cone_round_trips():
    cone = OrderingCone([[1, 1], [0, 1]])
    f = AffineMap([[1, 0], [0, 1]], Vector([0, 0]))
    g = AffineMap([[2, 0], [1, 1]], Vector([1, 0]))
    form = MinMaxForm([(f,), (g,)], cone)
    data = form_to_data(form)
    assert data["cone"] == [["1", "1"], ["0", "1"]]
    again = form_from_data(data)
    assert again.cone.generators == cone.generators
    for x in sample_points(random.Random(2), 2, 10):
        assert eval_form(again, x) == eval_form(form, x)


def test_dc_group_order_is_preserved():
    p, _ = random_pwa(random.Random(5), 1, 1, leaves=2)
    dc = to_dc(p)
    again = form_from_data(form_to_data(dc))
    assert isinstance(again, DcForm)
    assert set(again.plus) == set(dc.plus)
    assert set(again.minus) == set(dc.minus)


def test_common_family_keeps_matrix_layout():
    p, _ = random_pwa(random.Random(6), 2, 1, leaves=3)
    family = to_common_family(p)
    again = form_from_data(form_to_data(family))
    assert isinstance(again, CommonFamily)
    assert again.rows == family.rows


def test_detect_kind():
    assert detect_kind(polyhedron_to_data(whole_space(1))) == "polyhedron"
    assert detect_kind(polyset_to_data(PolyhedralSet(1, []))) == "polyset"
    c = Covering(whole_space(1), [whole_space(1)])
    assert detect_kind(covering_to_data(c)) == "covering"
    assert detect_kind(pwa_to_data(abs_map())) == "pwamap"
    assert detect_kind(form_to_data(form_fixtures()[0])) == "form"
    with pytest.raises(MalformedInput):
        detect_kind({"mystery": 1})
    with pytest.raises(MalformedInput):
        detect_kind([1, 2])


def test_malformed_documents_rejected():
    good = pwa_to_data(abs_map())
    bad_cases = [
        {},
        {"dim": 0, "halfspaces": []},
        {"dim": True, "halfspaces": []},
        {"dim": 1, "halfspaces": [{"a": ["1", "0"], "alpha": "0"}]},
        {"dim": 1, "halfspaces": [{"a": ["1"], "alpha": "1/0"}]},
        {"dim": 1, "halfspaces": [{"a": ["one"], "alpha": "0"}]},
        {"dim": 1, "halfspaces": [{"a": ["1"]}]},
        {"dim": 1, "halfspaces": "nope"},
    ]
    for case in bad_cases:
        with pytest.raises(MalformedInput):
            polyhedron_from_data(case)
    with pytest.raises(MalformedInput):
        pwa_from_data({**good, "pieces": good["pieces"][:1]})
    with pytest.raises(MalformedInput):
        pwa_from_data({**good, "cells": [], "pieces": []})
    with pytest.raises(MalformedInput):
        loads("{not json")
    with pytest.raises(MalformedInput):
        loads("[1, 2]")


def test_malformed_forms_rejected():
    data = form_to_data(form_fixtures()[1])
    with pytest.raises(MalformedInput):
        form_from_data({**data, "kind": "sum"})
    with pytest.raises(MalformedInput):
        form_from_data({**data, "groups": []})
    with pytest.raises(MalformedInput):
        form_from_data({**data, "groups": [[]]})
    with pytest.raises(MalformedInput):
        form_from_data({**data, "kind": "dc", "groups": data["groups"][:1]})
    maxaff = form_to_data(form_fixtures()[0])
    with pytest.raises(MalformedInput):
        form_from_data({**maxaff, "groups": maxaff["groups"] * 2})
