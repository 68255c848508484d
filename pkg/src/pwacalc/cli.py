"""Command line front end over serialized documents.

Every subcommand reads JSON documents (see serialize), writes results to
--out or stdout, and reports problems as a one-line JSON diagnostic on
stderr.  Exit codes: 0 on success, 1 on semantic failures (bad documents,
infeasible requests), 2 on usage errors.  All indices in diagnostics and
file outputs are 0-based.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import pwa, serialize
from .approx import BoxGrid, interpolate, sup_error
from .covering import Covering, covers, refine_to_partition, solidify
from .errors import MalformedInput, PwacalcError
from .exprs import parse_expression
from .forms import convex_to_max_form, eval_form, is_convex, to_common_family, to_dc, to_min_max
from .geometry import OrderingCone, Vector, rat, rat_str
from .polyhedra import feasible_point, interior_point, is_empty
from .pwl import NO, PwlMap, is_piecewise_linear, to_linear_forms
from .serialize import ordering_cone_from_data


def _diagnostic(kind: str, detail: str, **extra) -> None:
    print(json.dumps({"error": kind, "detail": detail, **extra}), file=sys.stderr)


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_doc(path: str) -> dict:
    return serialize.loads(_read_text(path))


def _load_pwa(path: str) -> pwa.PwaMap:
    return serialize.pwa_from_data(_load_doc(path))


def _load_covering(path: str) -> Covering:
    return serialize.covering_from_data(_load_doc(path))


def _load_ordering_cone(path: Optional[str]) -> Optional[OrderingCone]:
    if path is None:
        return None
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"cone file is not valid JSON: {exc}") from exc
    return ordering_cone_from_data(data)


def _parse_vector(text: str) -> Vector:
    parts = [p.strip() for p in text.split(",")]
    try:
        return Vector(rat(p) for p in parts)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise MalformedInput(f"bad vector {text!r}: {exc}") from exc


def _parse_box(text: str) -> tuple[Vector, Vector]:
    corners = text.split(":")
    if len(corners) != 2:
        raise MalformedInput('box must be "lo,lo,...:hi,hi,..."')
    return _parse_vector(corners[0]), _parse_vector(corners[1])


def _parse_resolution(text: str):
    parts = [p.strip() for p in text.split(",")]
    try:
        counts = [int(p) for p in parts]
    except ValueError as exc:
        raise MalformedInput(f"bad resolution {text!r}: {exc}") from exc
    return counts[0] if len(counts) == 1 else tuple(counts)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_doc(args, data: dict) -> int:
    _emit(args, serialize.dumps(data))
    return 0


def _vector_line(v: Vector) -> str:
    return ",".join(rat_str(c) for c in v.coords)


def _grid_from_args(args) -> BoxGrid:
    lower, upper = _parse_box(args.box)
    return BoxGrid(lower, upper, _parse_resolution(args.res))


def _oracle_from_args(args, dim_in: int):
    return parse_expression(args.expr).oracle(dim_in, args.precision)


def cmd_validate(args) -> int:
    data = _load_doc(args.file)
    kind = serialize.detect_kind(data)
    if kind == "pwamap":
        report = pwa.validate(serialize.pwa_from_data(data))
        if report.inconsistent_pairs:
            i, j = report.inconsistent_pairs[0]
            _diagnostic(
                "inconsistent",
                f"pieces on cells {i} and {j} disagree on their overlap",
                cells=[i, j],
            )
            return 1
        if not report.covered:
            _diagnostic("not_covering", "cells do not cover the space")
            return 1
    elif kind == "covering":
        c = serialize.covering_from_data(data)
        if not covers(c.cells, c.ambient):
            _diagnostic("not_covering", "cells do not cover the ambient")
            return 1
    elif kind == "polyhedron":
        serialize.polyhedron_from_data(data)
    elif kind == "polyset":
        serialize.polyset_from_data(data)
    else:
        serialize.form_from_data(data)
    print("ok")
    return 0


def cmd_eval(args) -> int:
    p = _load_pwa(args.file)
    print(_vector_line(pwa.eval_map(p, _parse_vector(args.x))))
    return 0


def cmd_eval_form(args) -> int:
    form = serialize.form_from_data(_load_doc(args.file))
    print(_vector_line(eval_form(form, _parse_vector(args.x))))
    return 0


def cmd_add(args) -> int:
    result = pwa.add(_load_pwa(args.left), _load_pwa(args.right))
    return _emit_doc(args, serialize.pwa_to_data(result))


def cmd_scale(args) -> int:
    try:
        factor = rat(args.factor)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise MalformedInput(f"bad factor {args.factor!r}: {exc}") from exc
    return _emit_doc(args, serialize.pwa_to_data(pwa.scale(_load_pwa(args.file), factor)))


def _cmd_lattice(args, take_sup: bool) -> int:
    cone = _load_ordering_cone(args.cone)
    op = pwa.lattice_sup if take_sup else pwa.lattice_inf
    result = op(_load_pwa(args.left), _load_pwa(args.right), cone)
    return _emit_doc(args, serialize.pwa_to_data(result))


def cmd_sup(args) -> int:
    return _cmd_lattice(args, True)


def cmd_inf(args) -> int:
    return _cmd_lattice(args, False)


def cmd_compose(args) -> int:
    result = pwa.compose(_load_pwa(args.outer), _load_pwa(args.inner))
    return _emit_doc(args, serialize.pwa_to_data(result))


def cmd_coords(args) -> int:
    p = _load_pwa(args.file)
    cone = _load_ordering_cone(args.cone)
    paths = []
    for k, component in enumerate(pwa.coordinates(p, cone)):
        path = Path(f"{args.out}{k}.json")
        path.write_text(serialize.dumps(serialize.pwa_to_data(component)), encoding="utf-8")
        paths.append(str(path))
    print("\n".join(paths))
    return 0


def cmd_graph(args) -> int:
    return _emit_doc(args, serialize.polyset_to_data(pwa.graph(_load_pwa(args.file))))


def cmd_from_graph(args) -> int:
    graph_set = serialize.polyset_from_data(_load_doc(args.file))
    result = pwa.from_graph(graph_set, args.dim_in)
    return _emit_doc(args, serialize.pwa_to_data(result))


def _cmd_graph_side(args, side: str) -> int:
    p = _load_pwa(args.file)
    cone_rows = None
    if args.cone is not None:
        cone_rows = serialize.polyhedron_from_data(_load_doc(args.cone)).halfspaces
    result = pwa.epigraph(p, cone_rows, side=side)
    return _emit_doc(args, serialize.polyset_to_data(result))


def cmd_epi(args) -> int:
    return _cmd_graph_side(args, "epi")


def cmd_hypo(args) -> int:
    return _cmd_graph_side(args, "hypo")


def cmd_is_convex(args) -> int:
    p = _load_pwa(args.file)
    print("convex" if is_convex(p, _load_ordering_cone(args.cone)) else "not convex")
    return 0


def cmd_to_maxaffine(args) -> int:
    form = convex_to_max_form(
        _load_pwa(args.file), _load_ordering_cone(args.cone), args.max_members
    )
    return _emit_doc(args, serialize.form_to_data(form))


def _cmd_minmax(args, orientation: str) -> int:
    form = to_min_max(
        _load_pwa(args.file),
        _load_ordering_cone(args.cone),
        orientation,
        args.max_members,
    )
    return _emit_doc(args, serialize.form_to_data(form))


def cmd_to_minmax(args) -> int:
    return _cmd_minmax(args, "minmax")


def cmd_to_maxmin(args) -> int:
    return _cmd_minmax(args, "maxmin")


def cmd_to_dc(args) -> int:
    form = to_dc(_load_pwa(args.file), _load_ordering_cone(args.cone), args.max_members)
    return _emit_doc(args, serialize.form_to_data(form))


def cmd_to_common(args) -> int:
    form = to_common_family(
        _load_pwa(args.file), _load_ordering_cone(args.cone), args.max_members
    )
    return _emit_doc(args, serialize.form_to_data(form))


def cmd_refine(args) -> int:
    result = refine_to_partition(_load_covering(args.file))
    return _emit_doc(args, serialize.covering_to_data(result))


def cmd_solidify(args) -> int:
    result = solidify(_load_covering(args.file))
    return _emit_doc(args, serialize.covering_to_data(result))


def cmd_is_pwl(args) -> int:
    p = _load_pwa(args.file)
    decision = is_piecewise_linear(p)
    print(decision.verdict)
    if decision.witness is not None:
        w = decision.witness
        print(
            json.dumps(
                {
                    "point": [rat_str(c) for c in w.point.coords],
                    "scale": rat_str(w.scale),
                }
            )
        )
    if args.out:
        if decision.verdict == NO:
            _diagnostic("not_homogeneous", "map is not positively homogeneous")
            return 1
        annotated = decision.conic_map if decision.conic_map is not None else p
        Path(args.out).write_text(
            serialize.dumps(serialize.pwa_to_data(annotated, pwl=True)),
            encoding="utf-8",
        )
    return 0


def cmd_to_linear(args) -> int:
    p = _load_pwa(args.file)
    decision = is_piecewise_linear(p)
    if decision.verdict == NO:
        w = decision.witness
        extra = {}
        if w is not None:
            extra = {
                "point": [rat_str(c) for c in w.point.coords],
                "scale": rat_str(w.scale),
            }
        _diagnostic("not_homogeneous", "map is not positively homogeneous", **extra)
        return 1
    pwl_map = PwlMap(decision.conic_map if decision.conic_map is not None else p)
    form = to_linear_forms(pwl_map, _load_ordering_cone(args.cone), kind=args.kind)
    return _emit_doc(args, serialize.form_to_data(form))


def cmd_approx(args) -> int:
    grid = _grid_from_args(args)
    oracle = _oracle_from_args(args, grid.dim)
    return _emit_doc(args, serialize.pwa_to_data(interpolate(oracle, grid)))


def cmd_error(args) -> int:
    grid = _grid_from_args(args)
    p = _load_pwa(args.file)
    oracle = _oracle_from_args(args, grid.dim)
    print(rat_str(sup_error(oracle, p, grid, args.samples, seed=args.seed)))
    return 0


def cmd_regions(args) -> int:
    data = _load_doc(args.file)
    kind = serialize.detect_kind(data)
    if kind == "pwamap":
        p = serialize.pwa_from_data(data)
        cells, dim = p.cells, p.dim_in
    elif kind == "covering":
        c = serialize.covering_from_data(data)
        cells, dim = c.cells, c.dim
    else:
        raise MalformedInput(f"regions needs a map or covering, found {kind}")
    if dim != 2:
        raise MalformedInput(f"regions is 2-D only, found dim {dim}")
    lines = []
    for cell in cells:
        if is_empty(cell):
            continue
        point = interior_point(cell)
        if point is None:
            point = feasible_point(cell)
        groups = [
            f"{rat_str(h.normal[0])},{rat_str(h.normal[1])},{rat_str(h.bound)}"
            for h in cell.halfspaces
        ]
        groups.append(_vector_line(point))
        lines.append(";".join(groups))
    _emit(args, "".join(line + "\n" for line in lines))
    return 0


def _add_out(sub) -> None:
    sub.add_argument("-o", "--out", help="output file (default: stdout)")


def _add_cone(sub) -> None:
    sub.add_argument("--cone", help="ordering cone file: JSON matrix of generator rows")


def _add_form_flags(sub) -> None:
    _add_cone(sub)
    sub.add_argument(
        "--max-members", type=int, default=100_000, help="abort above this many members"
    )
    _add_out(sub)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwacalc",
        description="Exact calculus for piecewise affine maps on serialized documents.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("validate", help="check a document's semantic invariants")
    sub.add_argument("file")
    sub.set_defaults(handler=cmd_validate)

    sub = subs.add_parser("eval", help="evaluate a map at a point")
    sub.add_argument("file")
    sub.add_argument("-x", required=True, help='point, e.g. "1/2,3"')
    sub.set_defaults(handler=cmd_eval)

    sub = subs.add_parser("eval-form", help="evaluate a form at a point")
    sub.add_argument("file")
    sub.add_argument("-x", required=True, help='point, e.g. "1/2,3"')
    sub.set_defaults(handler=cmd_eval_form)

    sub = subs.add_parser("add", help="pointwise sum of two maps")
    sub.add_argument("left")
    sub.add_argument("right")
    _add_out(sub)
    sub.set_defaults(handler=cmd_add)

    sub = subs.add_parser("scale", help="multiply a map by a rational factor")
    sub.add_argument("file")
    sub.add_argument("factor")
    _add_out(sub)
    sub.set_defaults(handler=cmd_scale)

    sub = subs.add_parser("sup", help="lattice supremum of two maps")
    sub.add_argument("left")
    sub.add_argument("right")
    _add_cone(sub)
    _add_out(sub)
    sub.set_defaults(handler=cmd_sup)

    sub = subs.add_parser("inf", help="lattice infimum of two maps")
    sub.add_argument("left")
    sub.add_argument("right")
    _add_cone(sub)
    _add_out(sub)
    sub.set_defaults(handler=cmd_inf)

    sub = subs.add_parser("compose", help="composition outer(inner(x))")
    sub.add_argument("outer")
    sub.add_argument("inner")
    _add_out(sub)
    sub.set_defaults(handler=cmd_compose)

    sub = subs.add_parser("coords", help="split a map into scalar coordinate maps")
    sub.add_argument("file")
    _add_cone(sub)
    sub.add_argument("-o", "--out", required=True, help="output path prefix")
    sub.set_defaults(handler=cmd_coords)

    sub = subs.add_parser("graph", help="the graph of a map as a polyhedral set")
    sub.add_argument("file")
    _add_out(sub)
    sub.set_defaults(handler=cmd_graph)

    sub = subs.add_parser("from-graph", help="recover a map from its graph")
    sub.add_argument("file")
    sub.add_argument("--dim-in", type=int, required=True, dest="dim_in")
    _add_out(sub)
    sub.set_defaults(handler=cmd_from_graph)

    sub = subs.add_parser("epi", help="epigraph with respect to a polyhedral cone")
    sub.add_argument("file")
    sub.add_argument("--cone", help="polyhedron file with the cone's halfspaces")
    _add_out(sub)
    sub.set_defaults(handler=cmd_epi)

    sub = subs.add_parser("hypo", help="hypograph with respect to a polyhedral cone")
    sub.add_argument("file")
    sub.add_argument("--cone", help="polyhedron file with the cone's halfspaces")
    _add_out(sub)
    sub.set_defaults(handler=cmd_hypo)

    sub = subs.add_parser("is-convex", help="convexity in the cone's order")
    sub.add_argument("file")
    _add_cone(sub)
    sub.set_defaults(handler=cmd_is_convex)

    sub = subs.add_parser("to-maxaffine", help="convex map as a max of affine maps")
    sub.add_argument("file")
    _add_form_flags(sub)
    sub.set_defaults(handler=cmd_to_maxaffine)

    sub = subs.add_parser("to-minmax", help="map as a min of maxes of affine maps")
    sub.add_argument("file")
    _add_form_flags(sub)
    sub.set_defaults(handler=cmd_to_minmax)

    sub = subs.add_parser("to-maxmin", help="map as a max of mins of affine maps")
    sub.add_argument("file")
    _add_form_flags(sub)
    sub.set_defaults(handler=cmd_to_maxmin)

    sub = subs.add_parser("to-dc", help="map as a difference of convex maps")
    sub.add_argument("file")
    _add_form_flags(sub)
    sub.set_defaults(handler=cmd_to_dc)

    sub = subs.add_parser("to-common", help="two-index family for both eval orders")
    sub.add_argument("file")
    _add_form_flags(sub)
    sub.set_defaults(handler=cmd_to_common)

    sub = subs.add_parser("refine", help="refine a covering into a partition")
    sub.add_argument("file")
    _add_out(sub)
    sub.set_defaults(handler=cmd_refine)

    sub = subs.add_parser("solidify", help="drop cells with empty interior")
    sub.add_argument("file")
    _add_out(sub)
    sub.set_defaults(handler=cmd_solidify)

    sub = subs.add_parser("is-pwl", help="decide positive homogeneity")
    sub.add_argument("file")
    sub.add_argument("-o", "--out", help="write the map annotated with pwl: true")
    sub.set_defaults(handler=cmd_is_pwl)

    sub = subs.add_parser("to-linear", help="linear min-max/max-min/dc form")
    sub.add_argument("file")
    sub.add_argument(
        "--kind", choices=("minmax", "maxmin", "dc"), default="minmax"
    )
    _add_cone(sub)
    _add_out(sub)
    sub.set_defaults(handler=cmd_to_linear)

    sub = subs.add_parser("approx", help="interpolate an expression on a grid")
    sub.add_argument("--expr", required=True, help='e.g. "x^2" or "min(x, y), x+y"')
    sub.add_argument("--box", required=True, help='corners "lo,lo:hi,hi"')
    sub.add_argument("--res", required=True, help='cells per axis, e.g. "4" or "4,8"')
    sub.add_argument("--precision", type=int, help="round oracle outputs to 10^-p")
    _add_out(sub)
    sub.set_defaults(handler=cmd_approx)

    sub = subs.add_parser("error", help="sampled sup deviation of a map from an expression")
    sub.add_argument("file")
    sub.add_argument("--expr", required=True)
    sub.add_argument("--box", required=True)
    sub.add_argument("--res", required=True)
    sub.add_argument("--samples", type=int, default=8, help="random points per simplex")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--precision", type=int, help="round oracle outputs to 10^-p")
    sub.set_defaults(handler=cmd_error)

    sub = subs.add_parser("regions", help="2-D cells with interior points, one row each")
    sub.add_argument("file")
    _add_out(sub)
    sub.set_defaults(handler=cmd_regions)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except PwacalcError as exc:
        _diagnostic(type(exc).__name__, str(exc))
        return 1
    except FileNotFoundError as exc:
        _diagnostic("missing_file", str(exc))
        return 1
    except OSError as exc:
        _diagnostic("io", str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
