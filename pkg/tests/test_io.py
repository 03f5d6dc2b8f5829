import json
from fractions import Fraction

import pytest

from eil.errors import MatrixFormatError
from eil.io import dumps, format_matrix_text, matrix_from_json_obj, matrix_to_json_obj, parse_matrix_text, read_matrix
from eil.linalg import RationalMatrix


def test_text_round_trip(tmp_path):
    a = RationalMatrix([["1/2", "0.25"], [1, "-3/7"]])
    text = format_matrix_text(a)
    assert text == "2\n1/2 1/4\n1 -3/7\n"
    assert parse_matrix_text(text) == a
    p = tmp_path / "a.txt"
    p.write_text("# comment\n2\n\n1/2 0.25\n1 -3/7  # trailing\n")
    assert read_matrix(p) == a


def test_json_round_trip(tmp_path):
    a = RationalMatrix([["1/2", 0], [1, "2/3"]])
    obj = matrix_to_json_obj(a)
    assert obj == {"n": 2, "entries": [["1/2", "0"], ["1", "2/3"]]}
    assert matrix_from_json_obj(json.loads(json.dumps(obj))) == a
    p = tmp_path / "a.json"
    p.write_text(json.dumps(obj))
    assert read_matrix(p) == a


@pytest.mark.parametrize(
    "text",
    ["", "x\n1", "2\n1 0\n", "2\n1 0\n0\n", "2\n1 a\n0 1\n", "2\n1 1/0\n0 1\n", "0\n"],
)
def test_bad_text(text):
    with pytest.raises(MatrixFormatError):
        parse_matrix_text(text)


def test_bad_json(tmp_path):
    p = tmp_path / "a.json"
    p.write_text('{"n": 3, "entries": [["1", "0"], ["0", "1"]]}')
    with pytest.raises(MatrixFormatError):
        read_matrix(p)
    with pytest.raises(MatrixFormatError):
        read_matrix(tmp_path / "missing.txt")


def test_dumps_floats_and_rationals():
    out = dumps({"x": 0.1, "r": Fraction(9, 4), "i": 3, "one": 1.0, "b": True, "none": None}, indent=None)
    assert out == '{"x": 0.10000000000000001, "r": "9/4", "i": 3, "one": 1.0, "b": true, "none": null}'
    assert json.loads(out)["x"] == 0.1


def test_dumps_is_deterministic_and_valid_json():
    obj = {"a": [[1, 2], [3, 4]], "b": {"c": [Fraction(1, 3), 2.5]}, "m": RationalMatrix([[1]])}
    assert dumps(obj) == dumps(obj)
    parsed = json.loads(dumps(obj))
    assert parsed["b"]["c"] == ["1/3", 2.5]
    assert parsed["m"] == {"n": 1, "entries": [["1"]]}
