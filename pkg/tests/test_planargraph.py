from collections import Counter

import networkx as nx
import pytest
import shapely.geometry as sg

from tilecolour.composites import decompose
from tilecolour.exactgeom import Transform, direction_class, polygon_area2, segment_relations
from tilecolour.oracle import ColourProblem, bipartite_or_witness
from tilecolour.planargraph import (
    DIRECTIONS, StructuralError, boundary_subgraph, build_graph, build_graph_from_tiles,
    degree_stats, dual_edges, dual_graph, edge_partition_by_length, pinwheel_doubled_supertile,
    subgraph_components)
from tilecolour.substitution import generate_patch, make_tile
from helpers import graph, patch

ALL = [("chair", None), ("rp", None), ("pinwheel", None), ("ab", "ab-triangle"), ("ab", "ab-rhombus")]


def test_single_chair_tile():
    g = build_graph_from_tiles("chair", [make_tile("chair", Transform.identity())])
    assert (g.n_vertices, g.n_edges, g.n_faces) == (8, 8, 1)
    assert g.euler_characteristic() == 2
    assert dual_edges(g) == []
    assert degree_stats(g, 0).delta_all == 2


@pytest.mark.parametrize("tiling,kind", ALL)
@pytest.mark.parametrize("level", range(6))
def test_euler_and_edge_incidence(tiling, kind, level):
    g = graph(tiling, level, kind)
    assert g.euler_characteristic() == 2
    assert g.is_connected()
    counts = Counter(len(fs) for fs in g.edge_faces)
    assert set(counts) <= {1, 2}
    # boundary edges form one simple cycle
    bg = nx.Graph([g.edges[e] for e in g.boundary_edges])
    assert all(d == 2 for _, d in bg.degree())
    assert nx.is_connected(bg) and bg.number_of_edges() == bg.number_of_nodes()


@pytest.mark.parametrize("tiling,kind", ALL)
def test_faces_are_simple_ccw_cycles_bound_to_tiles(tiling, kind):
    p, g = patch(tiling, 3, kind), graph(tiling, 3, kind)
    for f, cyc in enumerate(g.faces):
        assert len(set(cyc)) == len(cyc)
        pts = [g.vertices[v] for v in cyc]
        assert polygon_area2(pts) == abs(p.tiles[f].area2())
        assert set(p.tiles[f].polygon) <= set(pts)
        assert g.face_tiles[f] == p.tiles[f].path


@pytest.mark.parametrize("tiling,kind", ALL)
def test_no_vertex_inside_an_edge(tiling, kind):
    g = graph(tiling, 3, kind)
    pts = [p.to_float() for p in g.vertices]
    for u, v in g.edges:
        (x1, y1), (x2, y2) = pts[u], pts[v]
        lo_x, hi_x, lo_y, hi_y = min(x1, x2), max(x1, x2), min(y1, y2), max(y1, y2)
        for w, (x, y) in enumerate(pts):
            if w in (u, v) or not (lo_x - 1e-9 <= x <= hi_x + 1e-9 and lo_y - 1e-9 <= y <= hi_y + 1e-9):
                continue
            seg = (g.vertices[u], g.vertices[v])
            assert segment_relations(g.vertices[w], seg) != "interior"
    assert len(set(g.vertices)) == g.n_vertices


def test_overlapping_tiles_are_reported():
    t = patch("chair", 1).tiles[0]
    with pytest.raises(StructuralError, match="overlap"):
        build_graph_from_tiles("chair", [t, t])


def test_rp_rectangle_pair_has_one_dual_edge():
    p = patch("rp", 1)
    g = build_graph(p)
    for a, b in dual_edges(g):
        ha = {x for x in p.tiles[a].polygon}
        hb = {x for x in p.tiles[b].polygon}
        if len(ha & hb) == 2:
            pair = build_graph_from_tiles("rp", [p.tiles[a], p.tiles[b]])
            if pair.n_vertices == 4:
                assert dual_edges(pair) == [(0, 1)]
                return
    pytest.fail("no two rp tiles form a rectangle")


def _shapely_dual(p):
    polys = [sg.Polygon([q.to_float() for q in t.polygon]) for t in p.tiles]
    return sorted((i, j) for i in range(len(polys)) for j in range(i + 1, len(polys))
                  if polys[i].intersection(polys[j]).length > 1e-9)


@pytest.mark.parametrize("tiling,level", [("chair", 1), ("chair", 2), ("rp", 2), ("ab", 2), ("pinwheel", 2)])
def test_dual_matches_shapely(tiling, level):
    p = patch(tiling, level)
    assert dual_edges(graph(tiling, level)) == _shapely_dual(p)


def test_chair_level1_dual():
    # the centre child touches all three others, and two corner children touch
    # the third; this gives five dual edges and a triangle
    edges = dual_edges(graph("chair", 1))
    assert len(edges) == 5
    _, cycle = bipartite_or_witness(ColourProblem(dual_graph(graph("chair", 1))))
    assert cycle is not None and len(cycle) == 3


def test_degree_stats_examples():
    assert degree_stats(graph("chair", 4), 2).delta_interior == 4
    assert degree_stats(graph("ab", 3), 2).delta_interior == 8
    assert degree_stats(graph("rp", 4), 2).delta_interior == 8
    assert degree_stats(graph("pinwheel", 4), 2).delta_interior == 8


@pytest.mark.parametrize("tiling,bound", [("chair", 4), ("ab", 8), ("rp", 8), ("pinwheel", 8)])
def test_degree_bounds_and_stability(tiling, bound):
    values = []
    for level in (3, 4):
        s = degree_stats(graph(tiling, level), 2)
        assert s.delta_interior <= s.delta_all <= bound
        values.append(s.delta_interior)
    assert values[0] <= values[1]
    assert values[1] == bound


@pytest.mark.parametrize("level", range(5))
def test_chair_graph_is_bipartite(level):
    colours, cycle = bipartite_or_witness(ColourProblem(graph("chair", level).adjacency))
    assert cycle is None and colours is not None


@pytest.mark.parametrize("tiling", ["chair", "ab", "rp"])
def test_direction_classes_cover_every_edge(tiling):
    g = graph(tiling, 4)
    assert all(direction_class(g.edge_vector(e), DIRECTIONS[tiling]) is not None for e in range(g.n_edges))
    assert None not in g.edge_direction


def test_ab_rhombus_supertile_borders_are_20_cycles():
    p, g = patch("ab", 4, "ab-rhombus"), graph("ab", 4, "ab-rhombus")
    depth = p.level - 2
    groups = {}
    for f, t in enumerate(p.tiles):
        groups.setdefault(t.path[:depth], set()).add(f)
    border = set(boundary_subgraph(g, p, 2))
    checked = 0
    for pre, faces in groups.items():
        if p.supertile(pre).kind != "ab-rhombus":
            continue
        own = [e for e in range(g.n_edges) if sum(f in faces for f in g.edge_faces[e]) == 1]
        assert set(own) <= border
        cyc = nx.Graph([g.edges[e] for e in own])
        assert nx.cycle_basis(cyc) and len(own) == 20 == cyc.number_of_nodes()
        assert all(d == 2 for _, d in cyc.degree())
        checked += 1
    assert checked > 10


def test_boundary_subgraph_edge_cases():
    p, g = patch("ab", 3), graph("ab", 3)
    assert boundary_subgraph(g, p, 0) == tuple(range(g.n_edges))
    assert set(boundary_subgraph(g, p, 3)) == set(g.boundary_edges)
    with pytest.raises(ValueError):
        boundary_subgraph(g, p, 4)


@pytest.mark.parametrize("tiling", ["pinwheel", "rp"])
def test_level1_composite_borders_are_6_cycles(tiling):
    p, g = patch(tiling, 3), graph(tiling, 3)
    dec = decompose(p, 1)
    complete = 0
    for cid, comp in enumerate(dec.composites):
        if not all(h.real for h in comp.halves):
            continue
        faces = {f for f, site in enumerate(dec.tile_site) if site[0] == cid}
        own = [e for e in range(g.n_edges) if sum(f in faces for f in g.edge_faces[e]) == 1]
        cyc = nx.Graph([g.edges[e] for e in own])
        assert len(own) == 6 == cyc.number_of_nodes()
        assert all(d == 2 for _, d in cyc.degree())
        complete += 1
    assert complete >= 10


def test_pinwheel_length_partition():
    g = graph("pinwheel", 2)
    legs, hyps = edge_partition_by_length(g)
    assert not set(legs) & set(hyps)
    assert len(legs) + len(hyps) == g.n_edges
    single = build_graph_from_tiles("pinwheel", [patch("pinwheel", 0).tiles[0]])
    assert sorted(single.edge_length_class) == ["1", "2", "sqrt5"]
    g3 = graph("pinwheel", 3)
    legs3, hyps3 = edge_partition_by_length(g3)
    assert nx.is_connected(nx.Graph([g3.edges[e] for e in legs3]))
    assert len(subgraph_components(g3, legs3)) == 1
    with pytest.raises(ValueError):
        edge_partition_by_length(graph("rp", 2))


def test_doubled_supertile_has_degree_8_vertex():
    w = pinwheel_doubled_supertile()
    assert w.degree == 8 and w.surrounded
    assert w.graph.n_faces == 10
    assert w.vertex not in w.graph.boundary_vertices


def test_build_graph_is_deterministic():
    a = build_graph(generate_patch("pinwheel", 3))
    b = build_graph(generate_patch("pinwheel", 3))
    assert a == b
