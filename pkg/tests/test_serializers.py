import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from probmet.bridge import MetricSpace
from probmet.exceptions import SchemaError
from probmet.numeric import INF, ONE
from probmet.serializers import (
    dump_morphism,
    dump_space,
    flatten_errors,
    load_space,
    parse_morphism,
    parse_space,
)
from probmet.spaces import DdfSpace, LevelSpace
from probmet.stepfn import DistanceDistribution, LevelFunction
from probmet.tnorm import MinimumTNorm, ProductTNorm
from probmet.types import Form

from .strategies import ddf_spaces, level_spaces


def levels_document(**changes):
    document = {
        "form": "levels",
        "tnorm": "product",
        "separated": True,
        "points": ["x", "y"],
        "dist": {"x|y": [["1/2", "inf"], ["1", "3/2"]]},
    }
    document.update(changes)
    return json.dumps(document)


def schema_errors(text, **kwargs):
    with pytest.raises(SchemaError) as exc:
        load_space(text, **kwargs)
    return exc.value.errors


def test_minimal_levels_file():
    s = parse_space(levels_document())
    assert isinstance(s, LevelSpace)
    assert s.tnorm == ProductTNorm()
    assert s.separated
    assert s.distance("x", "y") == LevelFunction.from_pairs(
        [(F(1, 2), INF), (ONE, F(3, 2))]
    )


def test_ddf_file():
    jumps = [["1", "1/2"], ["3", "1"]]
    text = levels_document(form="ddf", tnorm="min", dist={"x|y": jumps})
    s = parse_space(text)
    assert isinstance(s, DdfSpace)
    assert s.tnorm == MinimumTNorm()
    assert s.distance("x", "y") == DistanceDistribution.from_pairs(
        [(ONE, F(1, 2)), (F(3), ONE)]
    )


def test_ddf_without_jumps_is_infinitely_far():
    s = parse_space(levels_document(form="ddf", dist={"x|y": []}))
    assert s.distance("x", "y") == DistanceDistribution(())


def test_metric_file_defaults_to_separated():
    s = parse_space('{"form": "metric", "points": ["a", "b"], "dist": {"a|b": "inf"}}')
    assert s == MetricSpace(("a", "b"), {("a", "b"): INF}, separated=True)


def test_decimals_are_rejected():
    errors = schema_errors(levels_document(dist={"x|y": [["0.5", "1"], ["1", "0"]]}))
    assert any("rationals only" in line for line in errors)
    assert all(line.startswith("dist.x|y") for line in errors)
    errors = schema_errors(levels_document(dist={"x|y": [[0.5, "1"], ["1", "0"]]}))
    assert any("rationals only" in line for line in errors)


def test_numbers_must_be_strings():
    errors = schema_errors(levels_document(dist={"x|y": [[1, "1"]]}))
    assert any("expected a string" in line for line in errors)


def test_unit_values_are_range_checked():
    errors = schema_errors(levels_document(dist={"x|y": [["inf", "1"]]}))
    assert errors == ["dist.x|y.0.0: 'inf' is not in [0, 1]"]
    jumps = {"x|y": [["1", "3/2"]]}
    errors = schema_errors(levels_document(form="ddf", dist=jumps))
    assert errors == ["dist.x|y.0.1: '3/2' is not in [0, 1]"]
    jumps = {"x|y": [["inf", "1"]]}
    errors = schema_errors(levels_document(form="ddf", dist=jumps))
    assert errors == ["dist.x|y: jump points must be finite"]


def test_steps_are_pairs():
    errors = schema_errors(levels_document(dist={"x|y": [["1"]]}))
    assert errors == ["dist.x|y.0: expected a pair [abscissa, value]"]


def test_increasing_levels_are_rejected():
    errors = schema_errors(levels_document(dist={"x|y": [["1/2", "1"], ["1", "2"]]}))
    assert errors == [
        "dist.x|y: level values must be nonincreasing (UD canonical form)"
    ]


def test_missing_and_misplaced_pairs():
    errors = schema_errors(
        levels_document(points=["x", "y", "z"], dist={"y|x": [["1", "1"]]})
    )
    assert "dist.y|x: ids not in point order, write x|y" in errors
    assert "dist.x|z: missing pair" in errors
    assert "dist.y|z: missing pair" in errors
    assert "dist.x|y: missing pair" in errors


def test_malformed_pair_keys():
    dist = {"x": [["1", "1"]], "x|x": [["1", "0"]]}
    errors = schema_errors(levels_document(dist=dist))
    assert "dist.x: pair keys have the form x|y" in errors
    assert "dist.x|x: the diagonal is implicit" in errors


def test_point_ids():
    errors = schema_errors(levels_document(points=["x", "x"], dist={}))
    assert errors == ["points: duplicate point ids: x"]
    errors = schema_errors(levels_document(points=["x|1", "y"]))
    assert errors[0].startswith("points: point ids may not contain '|'")


def test_form_and_tnorm_are_checked():
    assert schema_errors(levels_document(form="graph")) == [
        "form: expected one of levels, ddf, metric"
    ]
    errors = schema_errors(levels_document(tnorm="hamacher-2"))
    assert errors[0].startswith("tnorm:")
    errors = schema_errors(levels_document(form="metric"), forms=Form.space_choices)
    assert errors == ["form: expected one of levels, ddf"]


def test_invalid_json():
    with pytest.raises(SchemaError, match="invalid JSON"):
        parse_space('{"form": "levels",')
    with pytest.raises(SchemaError, match="expected a JSON object"):
        parse_space("[]")


def test_canonical_dump():
    s = parse_space(levels_document(dist={"x|y": [["1/4", "4/2"], ["1", "2"]]}))
    assert json.loads(dump_space(s)) == {
        "form": "levels",
        "tnorm": "product",
        "separated": True,
        "points": ["x", "y"],
        "dist": {"x|y": [["1", "2"]]},
    }
    text = dump_space(s)
    assert text.startswith('{\n  "form": "levels",\n  "tnorm": "product",\n')
    assert text.endswith("}\n")


def test_metric_dump(metric_space):
    assert json.loads(dump_space(metric_space)) == {
        "form": "metric",
        "separated": True,
        "points": ["a", "b", "c"],
        "dist": {"a|b": "1", "a|c": "1", "b|c": "1"},
    }


def test_morphism_with_a_path_reference(tmp_path, level_space):
    (tmp_path / "spaces").mkdir()
    (tmp_path / "spaces" / "target.json").write_text(dump_space(level_space))
    text = json.dumps(
        {
            "source": json.loads(levels_document()),
            "target": "spaces/target.json",
            "map": {"x": "a", "y": "c"},
        }
    )
    f, source, target = parse_morphism(text, base_dir=tmp_path)
    assert target == level_space
    assert source.points == ("x", "y")
    assert (f("x"), f("y")) == ("a", "c")
    assert json.loads(dump_morphism(f, source, target))["target"]["points"] == [
        "a",
        "b",
        "c",
    ]


def test_morphism_errors(tmp_path, level_space):
    document = {
        "source": json.loads(levels_document()),
        "target": json.loads(dump_space(level_space)),
        "map": {"x": "a"},
    }
    with pytest.raises(SchemaError) as exc:
        parse_morphism(json.dumps(document), base_dir=tmp_path)
    assert exc.value.errors[0].startswith("map: ")
    document["target"] = "missing.json"
    with pytest.raises(SchemaError) as exc:
        parse_morphism(json.dumps(document), base_dir=tmp_path)
    assert exc.value.errors[0].startswith("target: cannot read")


def test_flatten_errors():
    detail = {"dist": {"a|b": {0: {1: ["bad"]}}}, "points": ["duplicate"]}
    assert flatten_errors(detail) == ["dist.a|b.0.1: bad", "points: duplicate"]
    assert flatten_errors(["broken"]) == ["file: broken"]


@settings(max_examples=100)
@given(level_spaces())
def test_level_files_are_stable(s):
    text = dump_space(s)
    assert parse_space(text) == s
    assert dump_space(parse_space(text)) == text


@settings(max_examples=100)
@given(ddf_spaces())
def test_ddf_files_are_stable(s):
    text = dump_space(s)
    assert parse_space(text) == s
