from fractions import Fraction

import pytest

from rate_regions.api.regions import build_general_region, explicit_region
from rate_regions.models.lattice import power_family
from rate_regions.models.messages import MessageSpec
from rate_regions.models.polyhedra import NumericPolyhedron, Row
from rate_regions.utils.formats import (
    dump_numeric,
    dump_symbolic,
    load_json,
    read_matrix,
    to_json,
    vertices_csv,
    vertices_frame,
    write_matrix,
)
from rate_regions.utils.errors import PolyhedronError

F = Fraction

MATRIX = """\
# variables: x y
# the unit triangle
= 1 -1 0  # diagonal
-1 0 0
0 -1 0
1 1 1/2  # cap
"""


def test_read_matrix():
    poly = read_matrix(MATRIX)
    assert poly.variables == ("x", "y")
    assert len(poly.equalities) == 1
    assert poly.equalities[0].label == "diagonal"
    assert poly.inequalities[2] == Row((F(1), F(1)), F(1, 2), "cap")


def test_write_matrix_format():
    poly = NumericPolyhedron(("a",), (Row((F(1, 3),), F(2), "top"),), (Row((F(1),), F(0)),))
    assert write_matrix(poly) == "# variables: a\n= 1 0\n1/3 2  # top\n"


def test_matrix_text_is_stable():
    assert write_matrix(read_matrix(MATRIX)) == write_matrix(read_matrix(write_matrix(read_matrix(MATRIX))))


@pytest.mark.parametrize(
    "text",
    [
        "1 2 3\n",
        "# variables: x\n1 2 3\n",
        "# variables: x\n1 half\n",
        "",
    ],
)
def test_read_matrix_rejects(text):
    with pytest.raises(PolyhedronError):
        read_matrix(text)


def test_symbolic_dump_is_tagged_and_reloads():
    region = build_general_region(MessageSpec.parse("1,23", 3), power_family(3))
    doc = dump_symbolic(region)
    assert doc["format"] == "rate_regions.symbolic/1"
    assert doc["variables"][2] == {"kind": "split", "origin": "1", "target": "1"}
    first = doc["inequalities"][0]["rhs"]["atoms"][0]
    assert first["receiver"] == 1 and first["coefficient"] == "1"
    loaded = load_json(to_json(doc))
    assert loaded.variable_names == region.variable_names
    assert [r.render() for r in loaded.inequalities] == [r.render() for r in region.inequalities]


def test_explicit_region_dump_keeps_multiple_atoms():
    region = explicit_region("two_common", 3)
    loaded = load_json(to_json(dump_symbolic(region)))
    assert loaded.inequalities[-1].rhs == region.inequalities[-1].rhs
    assert loaded.title == region.title


def test_numeric_dump_reloads():
    poly = read_matrix(MATRIX)
    doc = dump_numeric(poly)
    assert doc["inequalities"][2]["bound"] == "1/2"
    assert load_json(to_json(doc)) == poly


def test_load_rejects_unknown_format():
    with pytest.raises(PolyhedronError):
        load_json('{"format": "other"}')


def test_vertices_csv():
    vertices = [(F(0), F(1, 2)), (F(3), F(0))]
    frame = vertices_frame(vertices, ["R_{1}", "R_{123}"])
    assert list(frame.columns) == ["R_{1}", "R_{123}"]
    assert frame.iloc[0, 1] == "1/2"
    assert vertices_csv(vertices, ["R_{1}", "R_{123}"]) == "R_{1},R_{123}\n0,1/2\n3,0\n"
