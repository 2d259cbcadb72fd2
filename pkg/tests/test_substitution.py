import pytest

from tilecolour.composites import hypotenuse
from tilecolour.exactgeom import Scalar, Transform, polygon_area2
from tilecolour.planargraph import build_graph
from tilecolour.render_io import dumps
from tilecolour.substitution import (
    PROTOTILES, SubstitutionError, ancestor_at_level, generate_patch, make_tile,
    orientation_code, substitute_once, tile_count)
from helpers import graph, patch


@pytest.mark.parametrize("tiling,level,count", [
    ("chair", 2, 16), ("pinwheel", 3, 125), ("rp", 2, 25), ("chair", 0, 1)])
def test_tile_count_examples(tiling, level, count):
    assert len(patch(tiling, level)) == count


@pytest.mark.parametrize("level", range(6))
def test_tile_counts_single_step_families(level):
    assert len(patch("chair", level)) == 4 ** level
    if level <= 5:
        assert len(patch("rp", level)) == 5 ** level
        assert len(patch("pinwheel", level)) == 5 ** level


@pytest.mark.parametrize("kind", ["ab-triangle", "ab-rhombus"])
def test_ab_counts_follow_recurrence(kind):
    t, r = (1, 0) if kind == "ab-triangle" else (0, 1)
    for level in range(6):
        p = patch("ab", level, kind)
        tris = sum(x.kind == "ab-triangle" for x in p.tiles)
        assert (tris, len(p) - tris) == (t, r)
        assert tile_count("ab", level, kind) == t + r
        t, r = 3 * t + 4 * r, 2 * t + 3 * r


def test_children_per_prototile():
    kinds = {}
    for kind in PROTOTILES:
        kids = substitute_once(make_tile(kind, Transform.scaling(5 if "ab" not in kind else 1)))
        kinds[kind] = sorted(k.kind for k in kids)
    assert len(kinds["chair"]) == 4
    assert len(kinds["pinwheel-triangle"]) == 5
    assert len(kinds["rp-triangle"]) == 5
    assert kinds["ab-triangle"].count("ab-triangle") == 3
    assert kinds["ab-triangle"].count("ab-rhombus") == 2
    assert kinds["ab-rhombus"].count("ab-triangle") == 4
    assert kinds["ab-rhombus"].count("ab-rhombus") == 3


def test_prototile_shapes():
    assert len(PROTOTILES["chair"].polygon) == 8
    tri = PROTOTILES["ab-triangle"].polygon
    sides = sorted((tri[i] - tri[i - 1]).dot(tri[i] - tri[i - 1]) for i in range(3))
    assert sides[0] == sides[1] and sides[2] == sides[0] + sides[1]
    for kind in ("rp-triangle", "pinwheel-triangle"):
        pts = PROTOTILES[kind].polygon
        sq = sorted((pts[i] - pts[i - 1]).dot(pts[i] - pts[i - 1]) for i in range(3))
        assert sq[1] == 4 * sq[0] and sq[2] == 5 * sq[0]
    for proto in PROTOTILES.values():
        assert polygon_area2(proto.polygon).sign() > 0


@pytest.mark.parametrize("tiling,kind", [
    ("chair", None), ("rp", None), ("pinwheel", None),
    ("ab", "ab-triangle"), ("ab", "ab-rhombus")])
def test_area_conservation(tiling, kind):
    p = patch(tiling, 4, kind)
    for depth in range(p.level):
        prefixes = {t.path[:depth] for t in p.tiles}
        for pre in prefixes:
            parent = p.supertile(pre)
            kids = substitute_once(parent)
            assert sum((abs(k.area2()) for k in kids), Scalar(0)) == abs(parent.area2())
    assert sum((abs(t.area2()) for t in p.tiles), Scalar(0)) == abs(p.seed.area2())


def test_ancestor_examples():
    p = patch("chair", 2)
    tile = next(t for t in p.tiles if t.path == (2, 3))
    anc = ancestor_at_level(p, tile, 1)
    assert anc.tile.path == (2,) and anc.child_index == 3
    assert anc.tile == p.supertile((2,))
    assert ancestor_at_level(p, tile, 0).tile == tile
    assert ancestor_at_level(p, tile, 2).tile == p.seed
    with pytest.raises(SubstitutionError):
        ancestor_at_level(p, tile, 3)


def test_orientation_code_examples():
    assert orientation_code(make_tile("chair", Transform.identity())) == 1
    assert [orientation_code(make_tile("chair", Transform.rotation90(q))) for q in range(4)] == [1, 2, 3, 4]
    rh = [orientation_code(make_tile("ab-rhombus", Transform.rotation45(2 * q))) for q in range(2)]
    assert sorted(rh) == [1, 3]
    tri = [orientation_code(make_tile("ab-triangle", Transform.rotation45(s))) for s in range(8)]
    assert tri[:2] == [5, 7]
    assert sorted(tri) == [1, 3, 5, 7, 9, 11, 13, 15]
    mirrored = [orientation_code(make_tile("ab-triangle", Transform.rotation45(s).compose(Transform.reflect_x())))
                for s in range(8)]
    assert sorted(mirrored) == [2, 4, 6, 8, 10, 12, 14, 16]


def test_orientation_code_ranges_in_patches():
    assert {t.orientation for t in patch("chair", 3).tiles} == {1, 2, 3, 4}
    ab = patch("ab", 4, "ab-triangle")
    assert {t.orientation for t in ab.tiles if t.kind == "ab-rhombus"} <= {1, 2, 3, 4}
    assert {t.orientation for t in ab.tiles if t.kind == "ab-triangle"} <= set(range(1, 17))
    assert {t.orientation for t in patch("rp", 3).tiles} <= set(range(1, 9))


def test_pinwheel_has_no_orientation_code():
    t = patch("pinwheel", 1).tiles[0]
    assert t.orientation is None
    with pytest.raises(SubstitutionError):
        orientation_code(t)


@pytest.mark.parametrize("tiling", ["rp", "pinwheel"])
def test_hypotenuses_pair_up_or_lie_on_boundary(tiling):
    p, g = patch(tiling, 4), graph(tiling, 4)
    seen = {}
    for t in p.tiles:
        seen.setdefault(frozenset(hypotenuse(t)), []).append(t)
    boundary = set(g.boundary_edges)
    on_hyp = {}
    for e, (u, v) in enumerate(g.edges):
        for f in g.edge_faces[e]:
            a, b = hypotenuse(p.tiles[f])
            if _on(g.vertices[u], a, b) and _on(g.vertices[v], a, b):
                on_hyp.setdefault(frozenset((a, b)), []).append(e)
    for hyp, tiles in seen.items():
        assert len(tiles) in (1, 2)
        if len(tiles) == 1:
            assert set(on_hyp[hyp]) <= boundary


def _on(p, a, b):
    d, w = b - a, p - a
    return not d.cross(w) and d.dot(w).sign() >= 0 and (d.dot(d) - d.dot(w)).sign() >= 0


def test_generation_is_deterministic():
    assert dumps(generate_patch("ab", 3)) == dumps(generate_patch("ab", 3))
    assert dumps(generate_patch("pinwheel", 3)) == dumps(generate_patch("pinwheel", 3))


def test_level_limits():
    with pytest.raises(SubstitutionError):
        generate_patch("chair", 8)
    with pytest.raises(SubstitutionError):
        generate_patch("chair", -1)
    assert len(generate_patch("chair", 2, max_level=2)) == 16
    with pytest.raises(SubstitutionError):
        generate_patch("chair", 3, max_level=2)


def test_seed_orientation_rotates_patch():
    a, b = generate_patch("chair", 2), generate_patch("chair", 2, seed_orientation=1)
    rot = Transform.rotation90(1)
    assert {tuple(rot.apply(x) for x in t.polygon) for t in a.tiles} == {t.polygon for t in b.tiles}


def test_coordinates_stay_in_expected_subring():
    for tiling in ("chair", "rp", "pinwheel"):
        for t in patch(tiling, 3).tiles:
            assert all(p.x.b == 0 and p.y.b == 0 for p in t.polygon)
    for tiling in ("chair", "rp"):
        for t in patch(tiling, 3).tiles:
            assert all(p.x.k == 0 and p.y.k == 0 for p in t.polygon)
    assert max(max(p.x.k, p.y.k) for t in patch("ab", 4).tiles for p in t.polygon) <= 6
    assert build_graph(patch("rp", 1)).n_faces == 5
