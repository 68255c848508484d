"""Canonical JSON documents for every artifact the package handles.

Rationals are written as "p" or "p/q" strings in lowest terms with positive
denominator.  Serialization sorts halfspaces, cells, and reorderable form
members by their serialized text, so semantically equal objects written by
different code paths produce byte-identical files.  Loading tolerates plain
integers wherever a rational string is expected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Sequence

from .covering import Covering
from .errors import MalformedInput
from .forms import CommonFamily, DcForm, MaxMinForm, MaxOfAffine, MinMaxForm
from .geometry import (
    AffineMap,
    Halfspace,
    OrderingCone,
    Vector,
    matrix,
    rat,
    rat_str,
    standard_cone,
)
from .polyhedra import ConvexPolyhedron, PolyhedralSet
from .pwa import PwaMap


def _key(data) -> str:
    return json.dumps(data, sort_keys=True)


def _rational(value) -> Fraction:
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise MalformedInput(f"expected a rational string, found {value!r}")
    try:
        return rat(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise MalformedInput(f"bad rational {value!r}: {exc}") from exc


def _str_list(v: Vector) -> list[str]:
    return [rat_str(c) for c in v.coords]


def _vector(data, dim: int, label: str) -> Vector:
    if not isinstance(data, list) or len(data) != dim:
        raise MalformedInput(f"{label} must be a list of {dim} rationals")
    return Vector(_rational(c) for c in data)


def _field(data, name: str, label: str):
    if not isinstance(data, dict) or name not in data:
        raise MalformedInput(f"{label} must be an object with a {name!r} field")
    return data[name]


def _dim_field(data, name: str, label: str) -> int:
    value = _field(data, name, label)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise MalformedInput(f"{label}.{name} must be a positive integer")
    return value


def polyhedron_to_data(p: ConvexPolyhedron) -> dict:
    rows = [
        {"a": _str_list(h.normal), "alpha": rat_str(h.bound)} for h in p.halfspaces
    ]
    return {"dim": p.dim, "halfspaces": sorted(rows, key=_key)}


def polyhedron_from_data(data) -> ConvexPolyhedron:
    dim = _dim_field(data, "dim", "polyhedron")
    rows = _field(data, "halfspaces", "polyhedron")
    if not isinstance(rows, list):
        raise MalformedInput("polyhedron.halfspaces must be a list")
    halfspaces = []
    for row in rows:
        normal = _vector(_field(row, "a", "halfspace"), dim, "halfspace.a")
        bound = _rational(_field(row, "alpha", "halfspace"))
        halfspaces.append(Halfspace(normal, bound))
    return ConvexPolyhedron(dim, halfspaces)


def polyset_to_data(s: PolyhedralSet) -> dict:
    pieces = [polyhedron_to_data(piece) for piece in s.pieces]
    return {"dim": s.dim, "pieces": sorted(pieces, key=_key)}


def polyset_from_data(data) -> PolyhedralSet:
    dim = _dim_field(data, "dim", "set")
    pieces = _field(data, "pieces", "set")
    if not isinstance(pieces, list):
        raise MalformedInput("set.pieces must be a list")
    return PolyhedralSet(dim, [polyhedron_from_data(piece) for piece in pieces])


def covering_to_data(c: Covering) -> dict:
    cells = [polyhedron_to_data(cell) for cell in c.cells]
    return {"ambient": polyhedron_to_data(c.ambient), "cells": sorted(cells, key=_key)}


def covering_from_data(data) -> Covering:
    ambient = polyhedron_from_data(_field(data, "ambient", "covering"))
    cells = _field(data, "cells", "covering")
    if not isinstance(cells, list):
        raise MalformedInput("covering.cells must be a list")
    return Covering(ambient, [polyhedron_from_data(cell) for cell in cells])


def affine_to_data(f: AffineMap) -> dict:
    return {"A": [_str_list(Vector(row)) for row in f.linear], "b": _str_list(f.offset)}


def affine_from_data(data, dim_in: int, dim_out: int) -> AffineMap:
    rows = _field(data, "A", "piece")
    if not isinstance(rows, list) or len(rows) != dim_out:
        raise MalformedInput(f"piece.A must be a list of {dim_out} rows")
    linear = matrix(_vector(row, dim_in, "piece.A row").coords for row in rows)
    offset = _vector(_field(data, "b", "piece"), dim_out, "piece.b")
    return AffineMap(linear, offset)


def pwa_to_data(p: PwaMap, pwl: bool = False) -> dict:
    pairs = sorted(
        (
            (polyhedron_to_data(cell), affine_to_data(piece))
            for cell, piece in zip(p.cells, p.pieces)
        ),
        key=lambda pair: (_key(pair[0]), _key(pair[1])),
    )
    data = {
        "dim_in": p.dim_in,
        "dim_out": p.dim_out,
        "cells": [cell for cell, _ in pairs],
        "pieces": [piece for _, piece in pairs],
    }
    if pwl:
        data["pwl"] = True
    return data


def pwa_from_data(data) -> PwaMap:
    dim_in = _dim_field(data, "dim_in", "map")
    dim_out = _dim_field(data, "dim_out", "map")
    cells = _field(data, "cells", "map")
    pieces = _field(data, "pieces", "map")
    if not isinstance(cells, list) or not isinstance(pieces, list):
        raise MalformedInput("map.cells and map.pieces must be lists")
    if not cells or len(cells) != len(pieces):
        raise MalformedInput("map needs one piece per cell and at least one cell")
    loaded_cells = [polyhedron_from_data(cell) for cell in cells]
    for cell in loaded_cells:
        if cell.dim != dim_in:
            raise MalformedInput(f"cell dim {cell.dim} differs from dim_in {dim_in}")
    loaded_pieces = [affine_from_data(piece, dim_in, dim_out) for piece in pieces]
    return PwaMap(loaded_cells, loaded_pieces)


def _cone_to_data(cone: OrderingCone) -> Optional[list[list[str]]]:
    if cone.is_standard():
        return None
    return [_str_list(g) for g in cone.generators]


def _cone_from_data(data, dim_out: int) -> OrderingCone:
    if data is None:
        return standard_cone(dim_out)
    if not isinstance(data, list) or len(data) != dim_out:
        raise MalformedInput(f"cone must be null or a list of {dim_out} generators")
    return OrderingCone(_vector(row, dim_out, "cone generator") for row in data)


def ordering_cone_from_data(data) -> OrderingCone:
    """A standalone cone document: a square matrix of generator rows."""
    if not isinstance(data, list) or not data:
        raise MalformedInput("cone must be a nonempty list of generator rows")
    n = len(data)
    return OrderingCone(_vector(row, n, "cone generator") for row in data)


def _sorted_group(members: Sequence[AffineMap]) -> list[dict]:
    return sorted((affine_to_data(m) for m in members), key=_key)


def form_to_data(form) -> dict:
    if isinstance(form, MaxOfAffine):
        kind = "maxaffine"
        groups = [_sorted_group(form.members)]
    elif isinstance(form, MinMaxForm):
        kind = "minmax"
        groups = sorted((_sorted_group(g) for g in form.groups), key=_key)
    elif isinstance(form, MaxMinForm):
        kind = "maxmin"
        groups = sorted((_sorted_group(g) for g in form.groups), key=_key)
    elif isinstance(form, DcForm):
        # group order is the semantics here: plus family, then minus family
        kind = "dc"
        groups = [_sorted_group(form.plus), _sorted_group(form.minus)]
    elif isinstance(form, CommonFamily):
        # rows and columns are index-aligned, so no reordering at all
        kind = "common"
        groups = [[affine_to_data(m) for m in row] for row in form.rows]
    else:
        raise MalformedInput(f"not a serializable form: {form!r}")
    return {"kind": kind, "groups": groups, "cone": _cone_to_data(form.cone)}


def form_from_data(data):
    kind = _field(data, "kind", "form")
    raw_groups = _field(data, "groups", "form")
    if not isinstance(raw_groups, list) or not raw_groups:
        raise MalformedInput("form.groups must be a nonempty list of lists")
    first = raw_groups[0]
    if not isinstance(first, list) or not first:
        raise MalformedInput("form groups must be nonempty lists")
    rows = _field(first[0], "A", "piece")
    if not isinstance(rows, list) or not rows or not isinstance(rows[0], list):
        raise MalformedInput("piece.A must be a matrix")
    dim_out, dim_in = len(rows), len(rows[0])
    groups = []
    for raw in raw_groups:
        if not isinstance(raw, list) or not raw:
            raise MalformedInput("form groups must be nonempty lists")
        groups.append([affine_from_data(m, dim_in, dim_out) for m in raw])
    cone = _cone_from_data(data.get("cone"), dim_out)
    if kind == "maxaffine":
        if len(groups) != 1:
            raise MalformedInput("maxaffine form must have exactly one group")
        return MaxOfAffine(groups[0], cone)
    if kind == "minmax":
        return MinMaxForm(groups, cone)
    if kind == "maxmin":
        return MaxMinForm(groups, cone)
    if kind == "dc":
        if len(groups) != 2:
            raise MalformedInput("dc form must have exactly two groups")
        return DcForm(groups[0], groups[1], cone)
    if kind == "common":
        return CommonFamily(groups, cone)
    raise MalformedInput(f"unknown form kind {kind!r}")


def detect_kind(data) -> str:
    """Which document schema a parsed JSON object follows."""
    if not isinstance(data, dict):
        raise MalformedInput("document must be a JSON object")
    if "kind" in data:
        return "form"
    if "dim_in" in data:
        return "pwamap"
    if "ambient" in data:
        return "covering"
    if "halfspaces" in data:
        return "polyhedron"
    if "pieces" in data:
        return "polyset"
    raise MalformedInput("document matches no known schema")


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"


def loads(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedInput("document must be a JSON object")
    return data
