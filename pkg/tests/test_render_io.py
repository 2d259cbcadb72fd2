import json
import xml.etree.ElementTree as ET

import pytest

from tilecolour import render_io
from tilecolour.colourers import Colouring, paper_colouring, standard_table
from tilecolour.exactgeom import Scalar
from tilecolour.planargraph import build_graph_from_tiles
from tilecolour.render_io import ParseError, RenderSpec, dumps, loads, render_svg, write_read_roundtrip
from tilecolour.substitution import Patch, default_seed
from helpers import graph, patch


def test_scalar_json_example():
    s = Scalar(3, -1, 2)
    assert s.to_json() == {"a": "3", "b": "-1", "k": 2}
    assert Scalar.from_json({"a": "3", "b": "-1", "k": 2}) == s


@pytest.mark.parametrize("tiling,level", [("chair", 3), ("ab", 3), ("rp", 3), ("pinwheel", 3)])
def test_roundtrip_patch_graph_colourings(tiling, level):
    p, g = patch(tiling, level), graph(tiling, level)
    assert write_read_roundtrip(p) == p
    assert write_read_roundtrip(g) == g
    for target in ("vertex", "edge", "face"):
        c = paper_colouring(p, target, g)
        assert write_read_roundtrip(c) == c


def test_roundtrip_tables_and_canonical_bytes():
    for tiling, target in [("chair", "face"), ("rp", "face"), ("ab", "vertex"), ("pinwheel", "vertex")]:
        t = standard_table(tiling, target)
        assert write_read_roundtrip(t) == t
    text = dumps(patch("rp", 2))
    assert dumps(loads(text)) == text
    assert text.endswith("\n") and ": " not in text


def test_patch_json_lists_polygons():
    doc = json.loads(dumps(patch("chair", 1)))
    assert doc["v"] == "v1" and doc["type"] == "patch"
    assert all(len(t["polygon"]) == 8 for t in doc["tiles"])


def test_non_canonical_scalar_rejected_with_location():
    doc = json.loads(dumps(patch("chair", 1)))
    doc["tiles"][2]["transform"]["translation"][0] = {"a": "2", "b": "0", "k": 1}
    with pytest.raises(ParseError) as err:
        render_io.from_json(doc)
    assert err.value.location.startswith("$.tiles[2].transform.translation")


def test_tampered_polygon_rejected():
    doc = json.loads(dumps(patch("chair", 1)))
    doc["tiles"][0]["polygon"][0] = {"a": "99", "b": "0", "k": 0}
    with pytest.raises(ParseError):
        render_io.from_json(doc)
    doc = json.loads(dumps(patch("chair", 1)))
    doc["tiles"][0]["polygon"][0] = [Scalar(99).to_json(), Scalar(0).to_json()]
    with pytest.raises(ParseError, match="polygon"):
        render_io.from_json(doc)


@pytest.mark.parametrize("text,where", [
    ("{", "line 1"),
    ('{"v": "v2", "type": "patch"}', "$.v"),
    ('{"v": "v1", "type": "nope"}', "$.type"),
    ('{"v": "v1", "type": "colouring", "target": "vertex", "palette": 2, '
     '"assignment": [[1, 0]], "tables_used": []}', "$.assignment[0]"),
])
def test_malformed_documents(text, where):
    with pytest.raises(ParseError) as err:
        loads(text)
    assert err.value.location.startswith(where)


def test_file_roundtrip(tmp_path):
    path = tmp_path / "c.colouring.json"
    c = paper_colouring(patch("chair", 2), "face", graph("chair", 2))
    render_io.write(c, str(path))
    assert render_io.read(str(path)) == c
    assert [p.name for p in tmp_path.iterdir()] == ["c.colouring.json"]


def test_svg_is_deterministic_and_valid():
    p, g = patch("chair", 4), graph("chair", 4)
    c = paper_colouring(p, "face", g)
    a, b = render_svg(p, g, c), render_svg(p, g, c)
    assert a == b
    root = ET.fromstring(a.encode())
    polys = root.findall(".//{http://www.w3.org/2000/svg}polygon")
    assert len(polys) == 256
    assert {x.get("fill") for x in polys} == set(RenderSpec().palette[:3])


def test_svg_edge_and_vertex_modes():
    p, g = patch("ab", 2), graph("ab", 2)
    for target, tag, count in (("edge", "line", g.n_edges), ("vertex", "circle", g.n_vertices)):
        svg = render_svg(p, g, paper_colouring(p, target, g))
        assert len(ET.fromstring(svg.encode()).findall(f".//{{http://www.w3.org/2000/svg}}{tag}")) == count


def test_empty_patch_svg():
    empty = Patch("chair", 0, default_seed("chair", 0), ())
    g = build_graph_from_tiles("chair", [])
    root = ET.fromstring(render_svg(empty, g).encode())
    assert root.tag.endswith("svg")


def test_conflict_highlighted():
    p, g = patch("chair", 1), graph("chair", 1)
    proper = paper_colouring(p, "face", g)
    bad = Colouring("face", (0,) + proper.assignment[1:], 3)
    bad = Colouring("face", (bad.assignment[1],) + bad.assignment[1:], 3)
    svg_bad = render_svg(p, g, bad)
    svg_ok = render_svg(p, g, proper)
    marker = 'stroke="#000000" stroke-width="1.800000"'
    assert marker in svg_bad and marker not in svg_ok
    plain = render_svg(p, g, bad, RenderSpec(highlight_conflicts=False))
    assert marker not in plain


def test_palette_too_small():
    p, g = patch("ab", 1), graph("ab", 1)
    with pytest.raises(ValueError):
        render_svg(p, g, paper_colouring(p, "edge", g), RenderSpec(palette=("#000000",) * 3))
