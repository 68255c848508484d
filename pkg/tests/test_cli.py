import json
from fractions import Fraction
from pathlib import Path

import pytest

from pwacalc import serialize
from pwacalc.cli import main
from pwacalc.geometry import AffineMap, Halfspace, Vector
from pwacalc.polyhedra import ConvexPolyhedron, whole_space
from pwacalc.pwa import PwaMap
from pwacalc.covering import Covering

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_doc(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(serialize.dumps(data), encoding="utf-8")
    return path


def abs_doc():
    left = ConvexPolyhedron(1, [Halfspace(Vector([1]), 0)])
    right = ConvexPolyhedron(1, [Halfspace(Vector([-1]), 0)])
    p = PwaMap([left, right], [AffineMap([[-1]], Vector([0])), AffineMap([[1]], Vector([0]))])
    return serialize.pwa_to_data(p)


def shifted_doc():
    return serialize.pwa_to_data(
        PwaMap([whole_space(1)], [AffineMap([[1]], Vector([1]))])
    )


def test_eval_golden(capsys):
    code, out, err = run(capsys, "eval", DATA / "max.json", "-x1/2,3")
    assert (code, out, err) == (0, "3\n", "")
    code, out, _ = run(capsys, "eval", DATA / "min.json", "-x1/2,3")
    assert (code, out) == (0, "1/2\n")


def test_validate_golden(capsys):
    code, out, err = run(capsys, "validate", DATA / "max.json")
    assert (code, out, err) == (0, "ok\n", "")


def test_validate_inconsistent_names_the_pair(capsys):
    code, out, err = run(capsys, "validate", DATA / "inconsistent.json")
    assert code == 1
    assert out == ""
    diag = json.loads(err)
    assert diag["error"] == "inconsistent"
    assert diag["cells"] == [0, 1]


def test_to_minmax_golden_bytes(capsys):
    for name in ("max", "min"):
        code, out, _ = run(capsys, "to-minmax", DATA / f"{name}.json")
        assert code == 0
        assert out == (DATA / f"{name}-minmax.json").read_text(encoding="utf-8")


def test_regions_golden_bytes(capsys):
    for name in ("max", "min"):
        code, out, _ = run(capsys, "regions", DATA / f"{name}.json")
        assert code == 0
        assert out == (DATA / f"{name}-regions.txt").read_text(encoding="utf-8")


def test_eval_form_matches_eval(capsys, tmp_path):
    form_path = tmp_path / "form.json"
    for name in ("max", "min"):
        for point in ("1/2,3", "-2,-2", "5,-7/3"):
            run(capsys, "to-minmax", DATA / f"{name}.json", "-o", form_path)
            _, via_form, _ = run(capsys, "eval-form", form_path, "-x" + point)
            _, direct, _ = run(capsys, "eval", DATA / f"{name}.json", "-x" + point)
            assert via_form == direct


def test_add_and_scale(capsys, tmp_path):
    out_path = tmp_path / "sum.json"
    code, _, _ = run(capsys, "add", DATA / "max.json", DATA / "min.json", "-o", out_path)
    assert code == 0
    # max + min is x1 + x2
    _, out, _ = run(capsys, "eval", out_path, "-x1/2,3")
    assert out == "7/2\n"
    code, _, _ = run(capsys, "scale", DATA / "max.json", "3/2", "-o", out_path)
    assert code == 0
    _, out, _ = run(capsys, "eval", out_path, "-x1/2,3")
    assert out == "9/2\n"


def test_sup_inf_and_validate_output(capsys, tmp_path):
    out_path = tmp_path / "lattice.json"
    code, _, _ = run(capsys, "sup", DATA / "max.json", DATA / "min.json", "-o", out_path)
    assert code == 0
    _, out, _ = run(capsys, "eval", out_path, "-x1/2,3")
    assert out == "3\n"
    code, out, _ = run(capsys, "validate", out_path)
    assert (code, out) == (0, "ok\n")
    run(capsys, "inf", DATA / "max.json", DATA / "min.json", "-o", out_path)
    _, out, _ = run(capsys, "eval", out_path, "-x1/2,3")
    assert out == "1/2\n"


def test_compose(capsys, tmp_path):
    abs_path = write_doc(tmp_path, "abs.json", abs_doc())
    out_path = tmp_path / "twice.json"
    code, _, _ = run(capsys, "compose", abs_path, abs_path, "-o", out_path)
    assert code == 0
    _, out, _ = run(capsys, "eval", out_path, "-x-3")
    assert out == "3\n"
    # dimension mismatch between stages is a semantic failure
    code, _, err = run(capsys, "compose", DATA / "max.json", DATA / "min.json")
    assert code == 1
    assert json.loads(err)["error"] == "DimensionMismatch"


def test_graph_round_trip(capsys, tmp_path):
    graph_path = tmp_path / "graph.json"
    map_path = tmp_path / "back.json"
    run(capsys, "graph", DATA / "max.json", "-o", graph_path)
    code, _, _ = run(capsys, "from-graph", graph_path, "--dim-in", "2", "-o", map_path)
    assert code == 0
    for point in ("1/2,3", "-1,-4", "2,2"):
        _, back, _ = run(capsys, "eval", map_path, "-x" + point)
        _, direct, _ = run(capsys, "eval", DATA / "max.json", "-x" + point)
        assert back == direct


def test_epi_hypo_with_explicit_cone(capsys, tmp_path):
    cone_path = write_doc(
        tmp_path,
        "cone.json",
        {"dim": 1, "halfspaces": [{"a": ["-1"], "alpha": "0"}]},
    )
    _, default_out, _ = run(capsys, "epi", DATA / "max.json")
    code, explicit_out, _ = run(capsys, "epi", DATA / "max.json", "--cone", cone_path)
    assert code == 0
    assert explicit_out == default_out
    data = serialize.loads(default_out)
    assert serialize.detect_kind(data) == "polyset"
    assert serialize.polyset_from_data(data).dim == 3
    code, hypo_out, _ = run(capsys, "hypo", DATA / "max.json")
    assert code == 0
    assert hypo_out != default_out


def test_is_convex(capsys):
    code, out, _ = run(capsys, "is-convex", DATA / "max.json")
    assert (code, out) == (0, "convex\n")
    code, out, _ = run(capsys, "is-convex", DATA / "min.json")
    assert (code, out) == (0, "not convex\n")


def test_to_maxaffine(capsys):
    code, out, _ = run(capsys, "to-maxaffine", DATA / "max.json")
    assert code == 0
    form = serialize.form_from_data(serialize.loads(out))
    assert len(form.members) == 2
    code, _, err = run(capsys, "to-maxaffine", DATA / "min.json")
    assert code == 1
    assert json.loads(err)["error"] == "NotConvex"


def test_refine_and_solidify(capsys, tmp_path):
    m1 = ConvexPolyhedron(2, [Halfspace(Vector([1, -1]), 0)])
    m2 = ConvexPolyhedron(2, [Halfspace(Vector([-1, 1]), 0)])
    covering_path = write_doc(
        tmp_path,
        "covering.json",
        serialize.covering_to_data(Covering(whole_space(2), [m1, m2, m1])),
    )
    out_path = tmp_path / "partition.json"
    code, _, _ = run(capsys, "refine", covering_path, "-o", out_path)
    assert code == 0
    refined = serialize.covering_from_data(serialize.loads(out_path.read_text()))
    assert len(refined.cells) == 2
    code, out, _ = run(capsys, "validate", out_path)
    assert (code, out) == (0, "ok\n")
    code, _, _ = run(capsys, "solidify", covering_path, "-o", out_path)
    assert code == 0
    solid = serialize.covering_from_data(serialize.loads(out_path.read_text()))
    assert len(solid.cells) == 3


def test_is_pwl_yes_with_annotation(capsys, tmp_path):
    out_path = tmp_path / "annotated.json"
    code, out, _ = run(capsys, "is-pwl", DATA / "max.json", "-o", out_path)
    assert (code, out) == (0, "yes\n")
    data = serialize.loads(out_path.read_text())
    assert data["pwl"] is True
    code, out, _ = run(capsys, "validate", out_path)
    assert (code, out) == (0, "ok\n")


def test_is_pwl_no_reports_witness(capsys, tmp_path):
    shifted_path = write_doc(tmp_path, "shifted.json", shifted_doc())
    code, out, _ = run(capsys, "is-pwl", shifted_path)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "no"
    witness = json.loads(lines[1])
    assert "point" in witness and "scale" in witness
    # asking for an annotated file on a refuted map is a failure
    code, _, err = run(capsys, "is-pwl", shifted_path, "-o", tmp_path / "x.json")
    assert code == 1
    assert json.loads(err)["error"] == "not_homogeneous"


def test_to_linear(capsys, tmp_path):
    form_path = tmp_path / "linear.json"
    for kind in ("minmax", "maxmin", "dc"):
        code, _, _ = run(
            capsys, "to-linear", DATA / "max.json", "--kind", kind, "-o", form_path
        )
        assert code == 0
        for point in ("1/2,3", "-4,1"):
            _, via_form, _ = run(capsys, "eval-form", form_path, "-x" + point)
            _, direct, _ = run(capsys, "eval", DATA / "max.json", "-x" + point)
            assert via_form == direct
    shifted_path = write_doc(tmp_path, "shifted.json", shifted_doc())
    code, _, err = run(capsys, "to-linear", shifted_path)
    assert code == 1
    diag = json.loads(err)
    assert diag["error"] == "not_homogeneous"
    assert "point" in diag


def test_approx_and_error(capsys, tmp_path):
    out_path = tmp_path / "interp.json"
    code, _, _ = run(
        capsys, "approx", "--expr", "x^2", "--box", "0:1", "--res", "4", "-o", out_path
    )
    assert code == 0
    _, out, _ = run(capsys, "eval", out_path, "-x1/8")
    assert out == "1/32\n"
    code, out, _ = run(
        capsys,
        "error",
        out_path,
        "--expr",
        "x^2",
        "--box",
        "0:1",
        "--res",
        "4",
        "--samples",
        "6",
    )
    assert code == 0
    measured = Fraction(out.strip())
    assert 0 < measured <= Fraction(1, 64)


def test_coords(capsys, tmp_path):
    prefix = tmp_path / "part"
    code, out, _ = run(capsys, "coords", DATA / "max.json", "-o", prefix)
    assert code == 0
    assert out == f"{prefix}0.json\n"
    _, out, _ = run(capsys, "eval", f"{prefix}0.json", "-x1/2,3")
    assert out == "3\n"


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["eval", "whatever.json"])
    assert info.value.code == 2
    capsys.readouterr()


def test_semantic_failures_exit_1(capsys, tmp_path):
    code, _, err = run(capsys, "eval", tmp_path / "nope.json", "-x1")
    assert code == 1
    assert json.loads(err)["error"] == "missing_file"

    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    code, _, err = run(capsys, "eval", broken, "-x1")
    assert code == 1
    assert json.loads(err)["error"] == "MalformedInput"

    # a form document where a map is expected
    form_path = tmp_path / "form.json"
    run(capsys, "to-minmax", DATA / "max.json", "-o", form_path)
    code, _, err = run(capsys, "eval", form_path, "-x1,2")
    assert code == 1
    assert json.loads(err)["error"] == "MalformedInput"

    code, _, err = run(capsys, "eval", DATA / "max.json", "-x1/0,2")
    assert code == 1
    code, _, err = run(capsys, "eval", DATA / "max.json", "-x1")
    assert code == 1
    assert json.loads(err)["error"] == "DimensionMismatch"
    code, _, err = run(capsys, "scale", DATA / "max.json", "lots")
    assert code == 1

    abs_path = write_doc(tmp_path, "abs.json", abs_doc())
    code, _, err = run(capsys, "regions", abs_path)
    assert code == 1
    assert json.loads(err)["error"] == "MalformedInput"
