import json

import pytest

from pyramid_tda.cli import format_number, main, parse_directions
from pyramid_tda.errors import ParseError
from pyramid_tda.io import load_barcode
from pyramid_tda.persistence import EPInterval, EPType, Interval


@pytest.fixture
def circle_file(tmp_path, circle_json):
    path = tmp_path / "circle.json"
    path.write_text(circle_json, encoding="utf-8")
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_extended_barcode(capsys, circle_file):
    code, out, _ = run(capsys, "barcode", circle_file, "--mode", "extended")
    assert code == 0
    bc = load_barcode(out)
    assert bc.counter() == {(0, EPInterval(EPType.EXT_PLUS, 1, 4)): 1, (1, EPInterval(EPType.EXT_MINUS, 1, 4)): 1}


def test_levelsets_barcode_both_ways(capsys, circle_file):
    _, direct, _ = run(capsys, "barcode", circle_file, "--mode", "lzz")
    _, through, _ = run(capsys, "barcode", circle_file, "--mode", "lzz", "--via-pyramid")
    assert load_barcode(direct) == load_barcode(through)
    assert load_barcode(direct).counter() == {(0, Interval.closed(-1.0, 1.0)): 1, (0, Interval.open(-1.0, 1.0)): 1}


def test_single_degree_and_output_file(capsys, circle_file, tmp_path):
    out_path = tmp_path / "h1.json"
    code, out, _ = run(capsys, "barcode", circle_file, "--degree", "1", "--out", out_path)
    assert code == 0 and out == ""
    assert load_barcode(out_path.read_text(encoding="utf-8")).degrees() == (1,)


def test_ordinary_barcode(capsys, circle_file):
    code, out, _ = run(capsys, "barcode", circle_file, "--mode", "ordinary")
    assert code == 0
    assert json.loads(out)["entries"][0]["hi"] == "inf"


def test_convert_and_distance(capsys, circle_file, tmp_path):
    _, ext, _ = run(capsys, "barcode", circle_file)
    ext_path = tmp_path / "ext.json"
    ext_path.write_text(ext, encoding="utf-8")
    for target in ("lzz", "blocks", "strip", "extended"):
        code, out, _ = run(capsys, "convert", ext_path, "--to", target)
        assert code == 0
        assert json.loads(out)["flavor"] == target
    code, out, _ = run(capsys, "distance", ext_path, ext_path)
    assert (code, out) == (0, "0\n")
    code, out, _ = run(capsys, "distance", ext_path, ext_path, "--kind", "strip")
    assert (code, out) == (0, "0\n")


def test_plot(capsys, circle_file, tmp_path):
    _, ext, _ = run(capsys, "barcode", circle_file)
    ext_path = tmp_path / "ext.json"
    ext_path.write_text(ext, encoding="utf-8")
    code, out, _ = run(capsys, "plot", ext_path)
    assert code == 0
    assert "<svg" in out


def test_project(capsys, tmp_path, square_json):
    path = tmp_path / "square.json"
    path.write_text(square_json, encoding="utf-8")
    code, out, _ = run(capsys, "project", path, "--directions", "4")
    assert code == 0
    doc = json.loads(out)
    assert [p["direction"] for p in doc["projections"]][0] == [1.0, 0.0]
    assert len(doc["projections"]) == 4


def test_unreadable_input_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    code, _, err = run(capsys, "barcode", bad)
    assert code == 2
    assert err.startswith("ParseError:")
    assert run(capsys, "barcode", tmp_path / "missing.json")[0] == 2


def test_failed_precondition_exits_3(capsys, tmp_path):
    path = tmp_path / "ties.json"
    path.write_text(json.dumps({"vertices": [{"id": 0, "value": 0}, {"id": 1, "value": 0}], "simplices": [[0, 1]]}))
    code, _, err = run(capsys, "barcode", path)
    assert code == 3
    assert "NotInjective" in err
    assert run(capsys, "barcode", path, "--perturb")[0] == 0


def test_levelsets_of_a_surface_need_the_pyramid(capsys, tmp_path):
    path = tmp_path / "disk.json"
    doc = {"vertices": [{"id": v, "value": float(v)} for v in range(3)], "simplices": [[0, 1, 2]]}
    path.write_text(json.dumps(doc))
    assert run(capsys, "barcode", path, "--mode", "lzz")[0] == 3
    code, out, _ = run(capsys, "barcode", path, "--mode", "lzz", "--via-pyramid")
    assert code == 0
    assert load_barcode(out).counter() == {(0, Interval.closed(0.0, 2.0)): 1}


def test_semantic_errors_exit_4(capsys, circle_file, tmp_path):
    _, ordinary, _ = run(capsys, "barcode", circle_file, "--mode", "ordinary")
    _, ext, _ = run(capsys, "barcode", circle_file)
    ord_path, ext_path = tmp_path / "ord.json", tmp_path / "ext.json"
    ord_path.write_text(ordinary)
    ext_path.write_text(ext)
    assert run(capsys, "convert", ord_path, "--to", "lzz")[0] == 4
    code, _, err = run(capsys, "distance", ord_path, ext_path)
    assert code == 4
    assert err.startswith("FlavorMismatch:")


def test_zigzag_mode(capsys, tmp_path):
    doc = {
        "vertices": [{"id": 0}, {"id": 1}],
        "simplices": [[0, 1]],
        "zigzag": {"spaces": [[[0]], [[0], [1]], [[1]]], "arrows": ["forward", "backward"]},
    }
    path = tmp_path / "zz.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "barcode", path, "--mode", "zigzag")
    assert code == 0
    assert load_barcode(out).counter() == {(0, Interval.closed(0.0, 1.0)): 1, (0, Interval.closed(1.0, 2.0)): 1}
    assert run(capsys, "barcode", tmp_path / "zz.json", "--mode", "extended")[0] == 2


def test_format_number():
    assert format_number(float("inf")) == "inf"
    assert format_number(0.1 + 0.2) == "0.3"
    assert format_number(2.0) == "2"


def test_parse_directions():
    assert len(parse_directions("6", 2)) == 6
    assert parse_directions("1,0;0,1", 2) == [(1.0, 0.0), (0.0, 1.0)]
    with pytest.raises(ParseError):
        parse_directions("north", 2)


def test_levelsets_of_tied_values_through_the_pyramid(capsys, tmp_path):
    path = tmp_path / "star.json"
    doc = {
        "vertices": [{"id": 0, "value": 0}, {"id": 1, "value": 0}, {"id": 2, "value": 0}, {"id": 3, "value": 1}],
        "simplices": [[0, 2], [2, 1], [2, 3]],
    }
    path.write_text(json.dumps(doc))
    assert run(capsys, "barcode", path, "--mode", "lzz", "--via-pyramid")[0] == 3
    code, out, err = run(capsys, "barcode", path, "--mode", "lzz", "--via-pyramid", "--perturb")
    assert code == 0, err
    assert load_barcode(out).counter() == {(0, Interval.closed(0.0, 1.0)): 1}


def test_projections_of_the_unit_square(capsys, tmp_path, square_json):
    path = tmp_path / "square.json"
    path.write_text(square_json, encoding="utf-8")
    code, out, _ = run(capsys, "project", path, "--directions", "8")
    assert code == 0
    projections = json.loads(out)["projections"]
    assert len(projections) == 8
    for k, item in enumerate(projections):
        bc = load_barcode(json.dumps(item["barcode"]))
        ext_plus = sum(m for deg, ep, m in bc if deg == 0 and ep.type is EPType.EXT_PLUS)
        ext_minus = sum(m for deg, ep, m in bc if deg == 1 and ep.type is EPType.EXT_MINUS)
        assert (ext_plus, ext_minus) == (1, 1), item["direction"]
        bc_path = tmp_path / f"direction{k}.json"
        bc_path.write_text(json.dumps(item["barcode"]), encoding="utf-8")
        for target in ("lzz", "strip", "blocks"):
            code, _, err = run(capsys, "convert", bc_path, "--to", target)
            assert code == 0, (item["direction"], target, err)
        code, out, _ = run(capsys, "distance", bc_path, bc_path, "--kind", "strip")
        assert (code, out) == (0, "0\n")


def test_barcode_files_survive_conversion_round_trips(capsys, circle_file, tmp_path):
    _, ext, _ = run(capsys, "barcode", circle_file)
    ext_path = tmp_path / "ext.json"
    ext_path.write_text(ext, encoding="utf-8")
    lzz_path = tmp_path / "lzz.json"
    assert run(capsys, "convert", ext_path, "--to", "lzz", "--out", lzz_path)[0] == 0
    code, back, _ = run(capsys, "convert", lzz_path, "--to", "extended")
    assert code == 0
    assert back == ext
    strip_path = tmp_path / "strip.json"
    assert run(capsys, "convert", lzz_path, "--to", "strip", "--out", strip_path)[0] == 0
    code, again, _ = run(capsys, "convert", strip_path, "--to", "lzz")
    assert code == 0
    assert again == lzz_path.read_text(encoding="utf-8")
