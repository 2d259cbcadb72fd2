"""Planar graphs of tiling patches: vertices, split edges, faces and duals.

Points are compared through an integer key ``(xa, xb, ya, yb)`` meaning
``((xa + xb*sqrt2) / 2**K, (ya + yb*sqrt2) / 2**K)`` at one common exponent
``K`` per graph, so equality, collinearity and betweenness are integer tests.
"""
from __future__ import annotations

import functools
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .exactgeom import Scalar, Vec2, direction_class
from .substitution import Patch, TileInstance, ancestor_at_level

__all__ = [
    "StructuralError",
    "TilingGraph",
    "GraphStats",
    "DIRECTIONS",
    "build_graph",
    "build_graph_from_tiles",
    "dual_graph",
    "degree_stats",
    "boundary_subgraph",
    "edge_partition_by_length",
]


class StructuralError(RuntimeError):
    """A patch or graph violates a structural property it must have."""


DIRECTIONS: Dict[str, Optional[Tuple[Vec2, ...]]] = {
    "chair": (Vec2(1, 0), Vec2(0, 1)),
    "ab": (Vec2(1, 0), Vec2(1, 1), Vec2(0, 1), Vec2(-1, 1)),
    "rp": (Vec2(1, 0), Vec2(0, 1), Vec2(2, 1), Vec2(-1, 2)),
    "pinwheel": None,
}

# Side index -> length class for the triangle prototiles (R->S, S->L, L->R).
# An edge on a short leg of one tile and a long leg of another gets "leg";
# a hypotenuse piece meeting a leg piece would get "other".
_TRIANGLE_SIDE_CLASS = ("1", "sqrt5", "2")
TILING_DEGREE_BOUND = {"chair": 4, "ab": 8, "rp": 8, "pinwheel": 8}

Key = Tuple[int, int, int, int]
_SQRT2 = math.sqrt(2.0)


def _mul(p: Tuple[int, int], q: Tuple[int, int]) -> Tuple[int, int]:
    return (p[0] * q[0] + 2 * p[1] * q[1], p[0] * q[1] + p[1] * q[0])


def _sign2(a: int, b: int) -> int:
    return Scalar(a, b).sign()


@dataclass(frozen=True)
class GraphStats:
    delta_all: int
    delta_interior: int
    V: int
    E: int
    F: int
    margin: int


@dataclass(frozen=True)
class TilingGraph:
    """Planar graph of a patch; face ``i`` is the tile with index ``i``."""

    tiling: str
    vertices: Tuple[Vec2, ...]
    edges: Tuple[Tuple[int, int], ...]
    edge_direction: Tuple[Optional[int], ...]
    edge_length_class: Tuple[str, ...]
    faces: Tuple[Tuple[int, ...], ...]
    face_edges: Tuple[Tuple[int, ...], ...]
    face_tiles: Tuple[Tuple[int, ...], ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    # -- incidence ---------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def _cached(self, name, fn):
        if name not in self._cache:
            self._cache[name] = fn()
        return self._cache[name]

    @property
    def edge_faces(self) -> Tuple[Tuple[int, ...], ...]:
        def build():
            ef: List[List[int]] = [[] for _ in self.edges]
            for f, es in enumerate(self.face_edges):
                for e in es:
                    ef[e].append(f)
            return tuple(tuple(x) for x in ef)
        return self._cached("edge_faces", build)

    @property
    def vertex_edges(self) -> Tuple[Tuple[int, ...], ...]:
        def build():
            ve: List[List[int]] = [[] for _ in self.vertices]
            for e, (u, v) in enumerate(self.edges):
                ve[u].append(e)
                ve[v].append(e)
            return tuple(tuple(x) for x in ve)
        return self._cached("vertex_edges", build)

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        def build():
            adj: List[List[int]] = [[] for _ in self.vertices]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            return tuple(tuple(sorted(a)) for a in adj)
        return self._cached("adjacency", build)

    def degree(self, v: int) -> int:
        return len(self.vertex_edges[v])

    @property
    def boundary_edges(self) -> Tuple[int, ...]:
        return self._cached("boundary_edges", lambda: tuple(
            e for e, fs in enumerate(self.edge_faces) if len(fs) == 1))

    @property
    def boundary_vertices(self) -> FrozenSet[int]:
        def build():
            out = set()
            for e in self.boundary_edges:
                out.update(self.edges[e])
            return frozenset(out)
        return self._cached("boundary_vertices", build)

    @functools.cached_property
    def point_index(self) -> Dict[Vec2, int]:
        return {p: i for i, p in enumerate(self.vertices)}

    def euler_characteristic(self) -> int:
        """V - E + F with the outer face counted."""
        return self.n_vertices - self.n_edges + self.n_faces + 1

    def edge_vector(self, e: int) -> Vec2:
        u, v = self.edges[e]
        return self.vertices[v] - self.vertices[u]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {0}
        todo = [0]
        adj = self.adjacency
        while todo:
            u = todo.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.n_vertices


class _KeyMap:
    """Conversion of exact points to integer keys at a common exponent."""

    def __init__(self, pts: Iterable[Vec2]) -> None:
        self.K = max((max(p.x.k, p.y.k) for p in pts), default=0)
        self.scale = float(2 ** self.K)

    def key(self, p: Vec2) -> Key:
        K = self.K
        x, y = p.x, p.y
        return (x.a << (K - x.k), x.b << (K - x.k), y.a << (K - y.k), y.b << (K - y.k))

    def approx(self, k: Key) -> Tuple[float, float]:
        return ((k[0] + k[1] * _SQRT2) / self.scale, (k[2] + k[3] * _SQRT2) / self.scale)

    def point(self, k: Key) -> Vec2:
        return Vec2(Scalar(k[0], k[1], self.K), Scalar(k[2], k[3], self.K))


def _interior_points(p: Key, q: Key, cands: Iterable[int], keys: List[Key]) -> List[int]:
    """Vertex ids strictly inside segment pq, ordered from p to q (exact)."""
    dx = (q[0] - p[0], q[1] - p[1])
    dy = (q[2] - p[2], q[3] - p[3])
    dd = _mul(dx, dx)
    dd2 = _mul(dy, dy)
    dlen = (dd[0] + dd2[0], dd[1] + dd2[1])
    hits = []
    for c in cands:
        r = keys[c]
        if r == p or r == q:
            continue
        wx = (r[0] - p[0], r[1] - p[1])
        wy = (r[2] - p[2], r[3] - p[3])
        c1 = _mul(dx, wy)
        c2 = _mul(dy, wx)
        if c1 != c2:
            continue
        t1 = _mul(dx, wx)
        t2 = _mul(dy, wy)
        t = (t1[0] + t2[0], t1[1] + t2[1])
        if _sign2(*t) <= 0 or _sign2(dlen[0] - t[0], dlen[1] - t[1]) <= 0:
            continue
        hits.append((t, c))
    if len(hits) > 1:
        hits.sort(key=functools.cmp_to_key(
            lambda a, b: _sign2(a[0][0] - b[0][0], a[0][1] - b[0][1])))
    return [c for _, c in hits]


def build_graph(patch: Patch) -> TilingGraph:
    """Planar graph of a patch (faces indexed like ``patch.tiles``)."""
    return build_graph_from_tiles(patch.tiling, patch.tiles)


def build_graph_from_tiles(tiling: str, tiles: Sequence[TileInstance]) -> TilingGraph:
    """Planar graph of an arbitrary list of tiles of one tiling.

    Every polygon side is split at all tile corners lying in its relative
    interior.  Raises :class:`StructuralError` when two tiles overlap along an
    edge (the same directed edge used twice).
    """
    polys = [t.polygon for t in tiles]
    km = _KeyMap(p for poly in polys for p in poly)
    keys: List[Key] = []
    index: Dict[Key, int] = {}
    tile_corner_ids: List[List[int]] = []
    for poly in polys:
        ids = []
        for p in poly:
            k = km.key(p)
            vid = index.get(k)
            if vid is None:
                vid = len(keys)
                index[k] = vid
                keys.append(k)
            ids.append(vid)
        tile_corner_ids.append(ids)

    # Spatial buckets for T-vertex candidates.
    approx = [km.approx(k) for k in keys]
    side_lengths = []
    for ids in tile_corner_ids[:64]:
        for i in range(len(ids)):
            (x0, y0), (x1, y1) = approx[ids[i]], approx[ids[(i + 1) % len(ids)]]
            side_lengths.append(math.hypot(x1 - x0, y1 - y0))
    cell = max(side_lengths) if side_lengths else 1.0
    buckets: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for vid, (x, y) in enumerate(approx):
        buckets[(math.floor(x / cell), math.floor(y / cell))].append(vid)
    tol = 1e-9 * cell

    def candidates(a: int, b: int) -> List[int]:
        (x0, y0), (x1, y1) = approx[a], approx[b]
        lo_x, hi_x = min(x0, x1) - tol, max(x0, x1) + tol
        lo_y, hi_y = min(y0, y1) - tol, max(y0, y1) + tol
        length = math.hypot(x1 - x0, y1 - y0)
        out = []
        for i in range(math.floor(lo_x / cell), math.floor(hi_x / cell) + 1):
            for j in range(math.floor(lo_y / cell), math.floor(hi_y / cell) + 1):
                for c in buckets.get((i, j), ()):
                    if c == a or c == b:
                        continue
                    x, y = approx[c]
                    if not (lo_x <= x <= hi_x and lo_y <= y <= hi_y):
                        continue
                    if abs((x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)) > 1e-6 * length * cell:
                        continue
                    out.append(c)
        return out

    side_cache: Dict[Tuple[int, int], List[int]] = {}
    directions = DIRECTIONS.get(tiling)
    faces: List[Tuple[int, ...]] = []
    face_edges: List[Tuple[int, ...]] = []
    edge_index: Dict[Tuple[int, int], int] = {}
    edges: List[Tuple[int, int]] = []
    edge_len: List[str] = []
    directed_owner: Dict[Tuple[int, int], int] = {}
    triangle = tiling in ("rp", "pinwheel")

    for f, (tile, ids) in enumerate(zip(tiles, tile_corner_ids)):
        n = len(ids)
        cycle: List[int] = []
        side_of_step: List[int] = []
        for i in range(n):
            a, b = ids[i], ids[(i + 1) % n]
            sk = (a, b) if a < b else (b, a)
            inner = side_cache.get(sk)
            if inner is None:
                inner = _interior_points(keys[sk[0]], keys[sk[1]], candidates(*sk), keys)
                side_cache[sk] = inner
            seq = inner if a < b else inner[::-1]
            cycle.append(a)
            side_of_step.append(i)
            for c in seq:
                cycle.append(c)
                side_of_step.append(i)
        if tile.reflected:
            # Canonical polygons are counterclockwise; reflections reverse them.
            cycle = [cycle[0]] + cycle[:0:-1]
            side_of_step = side_of_step[::-1]
            steps = [(cycle[j], cycle[(j + 1) % len(cycle)]) for j in range(len(cycle))]
        else:
            steps = [(cycle[j], cycle[(j + 1) % len(cycle)]) for j in range(len(cycle))]
        fe = []
        for j, (u, v) in enumerate(steps):
            owner = directed_owner.get((u, v))
            if owner is not None:
                raise StructuralError(f"tiles {owner} and {f} overlap along edge {(u, v)}")
            directed_owner[(u, v)] = f
            ek = (u, v) if u < v else (v, u)
            eid = edge_index.get(ek)
            cls = _TRIANGLE_SIDE_CLASS[side_of_step[j]] if triangle else (
                "1" if tiling == "chair" else "other")
            if eid is None:
                eid = len(edges)
                edge_index[ek] = eid
                edges.append(ek)
                edge_len.append(cls)
            elif edge_len[eid] != cls:
                legs = {edge_len[eid], cls} <= {"1", "2", "leg"}
                edge_len[eid] = "leg" if legs else "other"
            fe.append(eid)
        faces.append(tuple(cycle))
        face_edges.append(tuple(fe))

    verts = tuple(km.point(k) for k in keys)
    edge_dir: List[Optional[int]] = []
    for (u, v) in edges:
        if directions is None:
            edge_dir.append(None)
        else:
            edge_dir.append(direction_class(verts[v] - verts[u], directions))
    return TilingGraph(
        tiling=tiling,
        vertices=verts,
        edges=tuple(edges),
        edge_direction=tuple(edge_dir),
        edge_length_class=tuple(edge_len),
        faces=tuple(faces),
        face_edges=tuple(face_edges),
        face_tiles=tuple(t.path for t in tiles),
    )


def dual_graph(g: TilingGraph) -> Tuple[Tuple[int, ...], ...]:
    """Face adjacency lists (outer face excluded, multi-edges collapsed)."""
    def build():
        adj: List[set] = [set() for _ in g.faces]
        for fs in g.edge_faces:
            if len(fs) == 2:
                a, b = fs
                adj[a].add(b)
                adj[b].add(a)
        return tuple(tuple(sorted(s)) for s in adj)
    return g._cached("dual", build)


def dual_edges(g: TilingGraph) -> List[Tuple[int, int]]:
    adj = dual_graph(g)
    return [(a, b) for a in range(len(adj)) for b in adj[a] if a < b]


def boundary_distance(g: TilingGraph) -> List[Optional[int]]:
    """Graph distance of every vertex to the patch boundary."""
    dist: List[Optional[int]] = [None] * g.n_vertices
    q = deque()
    for v in sorted(g.boundary_vertices):
        dist[v] = 0
        q.append(v)
    adj = g.adjacency
    while q:
        u = q.popleft()
        for w in adj[u]:
            if dist[w] is None:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def degree_stats(g: TilingGraph, boundary_margin: int = 2) -> GraphStats:
    """Maximum degrees overall and over vertices farther than the margin."""
    dist = boundary_distance(g)
    degs = [len(x) for x in g.vertex_edges]
    delta_all = max(degs, default=0)
    inner = [d for d, r in zip(degs, dist) if r is not None and r > boundary_margin]
    return GraphStats(delta_all, max(inner, default=0), g.n_vertices, g.n_edges,
                      g.n_faces, boundary_margin)


def boundary_subgraph(g: TilingGraph, patch: Patch, k: int) -> Tuple[int, ...]:
    """Edge ids on the boundaries of level-k supertiles (plus the patch boundary)."""
    if not 0 <= k <= patch.level:
        raise ValueError(f"level {k} outside 0..{patch.level}")
    depth = patch.level - k
    out = []
    for e, fs in enumerate(g.edge_faces):
        if len(fs) == 1:
            out.append(e)
        elif k == 0 or g.face_tiles[fs[0]][:depth] != g.face_tiles[fs[1]][:depth]:
            out.append(e)
    return tuple(out)


def edge_partition_by_length(g: TilingGraph) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Split pinwheel edges into (P_{1,2}, P_sqrt5): leg pieces vs hypotenuse pieces."""
    if g.tiling != "pinwheel":
        raise ValueError("length partition is defined for pinwheel graphs only")
    legs, hyps = [], []
    for e, cls in enumerate(g.edge_length_class):
        if cls == "sqrt5":
            hyps.append(e)
        elif cls in ("1", "2", "leg"):
            legs.append(e)
        else:
            raise StructuralError(f"edge {e} lies on a hypotenuse and on a leg")
    return tuple(legs), tuple(hyps)


def subgraph_components(g: TilingGraph, edge_ids: Iterable[int]) -> List[List[int]]:
    """Connected components of an edge subset, as sorted edge-id lists."""
    edge_ids = sorted(set(edge_ids))
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edge_ids:
        for v in g.edges[e]:
            parent.setdefault(v, v)
    for e in edge_ids:
        u, v = g.edges[e]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    comps: Dict[int, List[int]] = defaultdict(list)
    for e in edge_ids:
        comps[find(g.edges[e][0])].append(e)
    return [comps[r] for r in sorted(comps)]


def tiles_ancestor_prefix(patch: Patch, k: int) -> List[Tuple[int, ...]]:
    """Hierarchy prefix of the level-k ancestor of every tile."""
    return [ancestor_at_level(patch, t, k).tile.path for t in patch.tiles]


@dataclass(frozen=True)
class DegreeWitness:
    """A fully surrounded vertex of a tile configuration and its degree."""

    graph: TilingGraph
    vertex: int
    degree: int
    surrounded: bool


def pinwheel_doubled_supertile(patch: Optional[Patch] = None) -> DegreeWitness:
    """Degree-8 pinwheel vertex from two level-1 supertiles.

    In a level-1 pinwheel supertile two children share a full side and
    together form an isosceles triangle.  Substituting both once more gives
    ten tiles; the witness is their surrounded vertex of largest degree
    (smallest id on ties), which has degree 8.  ``patch`` defaults to the
    standard level-2 patch.
    """
    from .substitution import generate_patch

    patch = patch or generate_patch("pinwheel", 2)
    if patch.tiling != "pinwheel" or patch.level < 2:
        raise ValueError("need a pinwheel patch of level >= 2")
    depth = patch.level - 1
    prefixes = sorted({t.path[:depth] for t in patch.tiles})
    supers = {p: patch.supertile(p) for p in prefixes}
    pair = None
    for i, p in enumerate(prefixes):
        if p[:-1] != prefixes[0][:-1]:
            continue
        for q in prefixes[i + 1:]:
            if q[:-1] != p[:-1]:
                continue
            a, b = supers[p].polygon, supers[q].polygon
            shared = [x for x in a if x in b]
            if len(shared) != 2:
                continue
            (u, w), apex_a, apex_b = shared, next(x for x in a if x not in b), next(x for x in b if x not in a)
            for mid, top in ((u, w), (w, u)):
                collinear = not (apex_a - mid).cross(apex_b - mid)
                if collinear and (apex_a - top).dot(apex_a - top) == (apex_b - top).dot(apex_b - top):
                    pair = (p, q)
            if pair:
                break
        if pair:
            break
    if pair is None:
        raise StructuralError("no isosceles pair of level-1 supertiles found")
    tiles = [t for t in patch.tiles if t.path[:depth] in pair]
    g = build_graph_from_tiles("pinwheel", tiles)
    inner = [v for v in range(g.n_vertices) if v not in g.boundary_vertices]
    if not inner:
        raise StructuralError("the doubled supertile has no surrounded vertex")
    v = max(inner, key=lambda x: (len(g.vertex_edges[x]), -x))
    return DegreeWitness(g, v, len(g.vertex_edges[v]), True)
