"""Constructive colourings of tiling graphs and a generic properness checker.

Colour indices follow one convention everywhere: 0 red, 1 blue, 2 green,
then further hues for the 4- and 8-colour edge palettes.
"""
from __future__ import annotations

import functools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from . import oracle
from .composites import Decomposition, decompose
from .exactgeom import TURN_SET, Vec2, classify_int, direction_class
from .planargraph import (DIRECTIONS, StructuralError, TilingGraph, build_graph, dual_edges,
                          edge_partition_by_length)
from .substitution import Patch, generate_patch, orientation_code

RED, BLUE, GREEN = 0, 1, 2
COLOUR_NAMES = ("red", "blue", "green")
TARGETS = ("vertex", "edge", "face")


class ColouringError(ValueError):
    """Base class for colouring failures."""


class PartialColouringError(ColouringError):
    """The colouring leaves some target element without a colour."""


class OddCycleError(ColouringError):
    """A subgraph that had to be bipartite contains an odd cycle."""

    def __init__(self, cycle: Sequence[int]) -> None:
        super().__init__(f"odd cycle of length {len(cycle)}: {list(cycle)[:12]}")
        self.cycle = list(cycle)


class MissingTableEntry(ColouringError, KeyError):
    """A colour table has no entry for a key met in the patch."""

    def __init__(self, scheme: str, key: Hashable) -> None:
        super().__init__(f"table {scheme!r} has no entry for key {key!r}")
        self.scheme = scheme
        self.key = key

    def __str__(self) -> str:
        return str(self.args[0])


# ---------------------------------------------------------------------------
# Colourings and their verification

@dataclass(frozen=True)
class Colouring:
    target: str
    assignment: Tuple[Optional[int], ...]
    palette: int
    tables_used: Tuple[Tuple[str, str], ...] = ()
    completed: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}")
        for c in self.assignment:
            if c is not None and not 0 <= c < self.palette:
                raise ValueError(f"colour {c} outside palette {self.palette}")

    def __len__(self) -> int:
        return len(self.assignment)

    def __getitem__(self, i: int) -> Optional[int]:
        return self.assignment[i]

    @property
    def is_total(self) -> bool:
        return all(c is not None for c in self.assignment)

    def colours_used(self) -> int:
        return len({c for c in self.assignment if c is not None})


@dataclass(frozen=True)
class ColouringReport:
    target: str
    elements: int
    conflicts: Tuple[Tuple[int, int], ...]

    @property
    def proper(self) -> bool:
        return not self.conflicts


def adjacent_pairs(g: TilingGraph, target: str) -> List[Tuple[int, int]]:
    """Pairs of target elements that must receive different colours."""
    if target == "vertex":
        return [tuple(sorted(e)) for e in g.edges]  # type: ignore[misc]
    if target == "edge":
        pairs = set()
        for es in g.vertex_edges:
            for i in range(len(es)):
                for j in range(i + 1, len(es)):
                    a, b = es[i], es[j]
                    pairs.add((a, b) if a < b else (b, a))
        return sorted(pairs)
    if target == "face":
        return dual_edges(g)
    raise ValueError(f"unknown target {target!r}")


def _element_count(g: TilingGraph, target: str) -> int:
    return {"vertex": g.n_vertices, "edge": g.n_edges, "face": g.n_faces}[target]


def verify_colouring(g: TilingGraph, c: Colouring) -> ColouringReport:
    """All adjacent pairs sharing a colour; raises if ``c`` is not total."""
    n = _element_count(g, c.target)
    if len(c.assignment) != n:
        raise PartialColouringError(f"{len(c.assignment)} colours for {n} {c.target} elements")
    missing = [i for i, x in enumerate(c.assignment) if x is None]
    if missing:
        raise PartialColouringError(f"{len(missing)} {c.target} elements uncoloured, first {missing[0]}")
    a = c.assignment
    conflicts = tuple((u, v) for u, v in adjacent_pairs(g, c.target) if a[u] == a[v])
    return ColouringReport(c.target, n, conflicts)


# ---------------------------------------------------------------------------
# Bipartite and directional colourings

def bipartite_2colour(obj: Union[TilingGraph, Tuple[int, Sequence[Tuple[int, int]]]],
                      edge_ids: Optional[Iterable[int]] = None) -> Colouring:
    """Breadth-first 2-colouring, rooted at the minimum vertex of each component.

    ``obj`` is a graph (optionally restricted to ``edge_ids``) or a pair
    ``(n_vertices, edges)``.  Vertices not touched by the chosen edges stay
    uncoloured.  Raises :class:`OddCycleError` with the cycle as witness.
    """
    if isinstance(obj, TilingGraph):
        n = obj.n_vertices
        edges = obj.edges if edge_ids is None else [obj.edges[e] for e in edge_ids]
        touched = None if edge_ids is None else {v for e in edges for v in e}
    else:
        n, edges = obj
        touched = {v for e in edges for v in e}
    problem = oracle.ColourProblem.from_edges(n, edges)
    colours, cycle = oracle.bipartite_or_witness(problem)
    if colours is None:
        raise OddCycleError(cycle or [])
    assignment = tuple(c if touched is None or v in touched else None
                       for v, c in enumerate(colours))
    return Colouring("vertex", assignment, 2)


def directional_edge_colour(g: TilingGraph, directions: Optional[Sequence[Vec2]] = None) -> Colouring:
    """Alternate two colours along every line, one colour pair per direction.

    Edge colour is ``2j + (rank mod 2)`` where ``j`` is the direction index
    and ``rank`` counts edges along the supporting line from its minimal edge.
    """
    if directions is None:
        if g.tiling not in DIRECTIONS:
            raise ColouringError(f"no direction set for {g.tiling}")
        directions = DIRECTIONS[g.tiling]
    lines: Dict[Tuple[int, object], List[Tuple[object, int]]] = defaultdict(list)
    for e, (u, v) in enumerate(g.edges):
        p, q = g.vertices[u], g.vertices[v]
        j = direction_class(q - p, directions)
        if j is None:
            raise ColouringError(f"edge {e} {p}->{q} matches no direction")
        d = directions[j]
        lines[(j, d.cross(p))].append((d.dot(p + q), e))
    colour: List[Optional[int]] = [None] * g.n_edges
    for (j, _offset), members in lines.items():
        members.sort(key=lambda m: m[0])
        for rank, (_t, e) in enumerate(members):
            colour[e] = 2 * j + rank % 2
    return Colouring("edge", tuple(colour), 2 * len(directions))


# ---------------------------------------------------------------------------
# Ammann-Beenker face rule

AB_RHOMBUS_BLUE = frozenset({1, 3})
AB_TRIANGLE_RED_LISTED = frozenset({1, 4, 5, 8, 9, 12, 16})


def ab_face_2colour(patch: Patch, code13: int = RED) -> Colouring:
    """Colour ab faces from orientation codes alone (0 red, 1 blue).

    The listed red triangle codes omit 13; ``code13`` decides it and
    :func:`resolve_ab_code13` shows which choice properness forces.
    """
    if patch.tiling != "ab":
        raise ColouringError("ab_face_2colour needs an ab patch")
    out = []
    for t in patch.tiles:
        code = orientation_code(t)
        if t.kind == "ab-rhombus":
            out.append(BLUE if code in AB_RHOMBUS_BLUE else RED)
        elif code == 13:
            out.append(code13)
        else:
            out.append(RED if code in AB_TRIANGLE_RED_LISTED else BLUE)
    return Colouring("face", tuple(out), 2)


def resolve_ab_code13(level: int = 4) -> Dict[int, bool]:
    """Properness of the face rule with code 13 red and blue on ab patches."""
    result = {}
    for choice in (RED, BLUE):
        ok = True
        for kind in ("ab-triangle", "ab-rhombus"):
            p = generate_patch("ab", level, kind=kind)
            ok &= verify_colouring(build_graph(p), ab_face_2colour(p, choice)).proper
        result[choice] = ok
    return result


# ---------------------------------------------------------------------------
# Pinwheel coset edge colouring

@dataclass(frozen=True)
class CosetReport:
    """Structure found while colouring one of the two pinwheel edge subgraphs."""

    subgraph: str
    components: int
    cosets_per_component: Tuple[int, ...]
    max_coset_degree: int
    paths: int


def _int_vector(v: Vec2) -> Tuple[int, int]:
    k = max(v.x.k, v.y.k)
    if v.x.b or v.y.b:
        raise StructuralError("pinwheel coordinates must be rational")
    return (v.x.a << (k - v.x.k), v.y.a << (k - v.y.k))


def turn_parity(d1: Tuple[int, int], d2: Tuple[int, int]) -> int:
    """1 if the angle between two outward edge directions is a turn."""
    cls = classify_int(d1, d2)
    if cls is None:
        raise StructuralError(f"angle between {d1} and {d2} is not a pinwheel angle")
    return int(cls in TURN_SET)


def _coset_colour_subgraph(g: TilingGraph, edge_ids: Sequence[int], name: str,
                           colour: List[Optional[int]], offset: int) -> CosetReport:
    ids = set(edge_ids)
    at_vertex: Dict[int, List[int]] = defaultdict(list)
    for e in sorted(ids):
        for v in g.edges[e]:
            at_vertex[v].append(e)

    def outward(e: int, v: int) -> Tuple[int, int]:
        a, b = g.edges[e]
        w = b if a == v else a
        return _int_vector(g.vertices[w] - g.vertices[v])

    nbrs: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    for v, es in at_vertex.items():
        dirs = [outward(e, v) for e in es]
        for i in range(len(es)):
            for j in range(i + 1, len(es)):
                p = turn_parity(dirs[i], dirs[j])
                nbrs[es[i]].append((es[j], p))
                nbrs[es[j]].append((es[i], p))

    coset: Dict[int, int] = {}
    comp_cosets: List[int] = []
    for root in sorted(ids):
        if root in coset:
            continue
        coset[root] = 0
        seen = {0}
        stack = [root]
        while stack:
            e = stack.pop()
            for f, p in nbrs[e]:
                want = coset[e] ^ p
                if f not in coset:
                    coset[f] = want
                    seen.add(want)
                    stack.append(f)
                elif coset[f] != want:
                    raise StructuralError(
                        f"{name}: turn parity contradiction between edges {e} and {f}")
        comp_cosets.append(len(seen))

    # within a coset: at most two edges per vertex, and no cycles
    max_deg = 0
    path_nbrs: Dict[int, List[int]] = defaultdict(list)
    for v, es in at_vertex.items():
        for c in (0, 1):
            same = [e for e in es if coset[e] == c]
            max_deg = max(max_deg, len(same))
            if len(same) > 2:
                raise StructuralError(f"{name}: vertex {v} has {len(same)} edges in one coset")
            if len(same) == 2:
                a, b = same
                path_nbrs[a].append(b)
                path_nbrs[b].append(a)
    visited = set()
    paths = 0
    ends = sorted(e for e in ids if len(path_nbrs[e]) <= 1)
    for start in ends:
        if start in visited:
            continue
        paths += 1
        prev, cur, parity = -1, start, 0
        while True:
            visited.add(cur)
            colour[cur] = offset + 2 * coset[cur] + parity
            nxt = [f for f in path_nbrs[cur] if f != prev]
            if not nxt:
                break
            prev, cur, parity = cur, nxt[0], parity ^ 1
    leftover = ids - visited
    if leftover:
        raise StructuralError(f"{name}: coset cycle through edge {min(leftover)}")
    return CosetReport(name, len(comp_cosets), tuple(comp_cosets), max_deg, paths)


def pinwheel_coset_edge_colour(g: TilingGraph, with_report: bool = False):
    """8-colour pinwheel edges: 4 * subgraph + 2 * coset + path parity.

    The subgraphs are the leg pieces and the hypotenuse pieces.  Each splits
    into two cosets under even turn counts; each coset is a union of paths
    which are coloured alternately from their minimum-id end.
    """
    legs, hyps = edge_partition_by_length(g)
    colour: List[Optional[int]] = [None] * g.n_edges
    reports = (_coset_colour_subgraph(g, legs, "P12", colour, 0),
               _coset_colour_subgraph(g, hyps, "Psqrt5", colour, 4))
    result = Colouring("edge", tuple(colour), 8)
    return (result, reports) if with_report else result


# ---------------------------------------------------------------------------
# Colour tables and keyed schemes

def _freeze(x):
    if isinstance(x, (list, tuple)):
        return tuple(_freeze(y) for y in x)
    return x


def key_order(key) -> tuple:
    """Total order on heterogeneous nested keys (type tag first)."""
    if isinstance(key, tuple):
        return (2, tuple(key_order(k) for k in key))
    if isinstance(key, str):
        return (1, key)
    if key is None:
        return (0, 0)
    return (0, key)


@dataclass(frozen=True)
class ColourTable:
    scheme: str
    tiling: str
    target: str
    level: int
    palette: int
    entries: Tuple[Tuple[Hashable, int], ...]
    provenance: str   # "paper-given" or "derived"
    _map: Dict[Hashable, int] = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        if self.provenance not in ("paper-given", "derived"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        self._map.update(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key) -> bool:
        return key in self._map

    def lookup(self, key: Hashable) -> int:
        try:
            return self._map[key]
        except KeyError:
            raise MissingTableEntry(self.scheme, key) from None

    @classmethod
    def build(cls, scheme: "TableScheme", entries: Dict[Hashable, int],
              provenance: str) -> "ColourTable":
        items = tuple(sorted(entries.items(), key=lambda kv: key_order(kv[0])))
        return cls(scheme.name, scheme.tiling, scheme.target, scheme.level, scheme.palette,
                   items, provenance)


Label = Tuple[str, Hashable]     # ("key", key) or ("fixed", colour)


class TableScheme:
    """A colouring rule: label each element with a table key or a fixed colour."""

    name = ""
    tiling = ""
    target = "face"
    level = 0
    palette = 3

    def labels(self, patch: Patch, g: TilingGraph, swap: bool = False) -> List[Label]:
        raise NotImplementedError

    def given_entries(self) -> Dict[Hashable, int]:
        return {}

    def training_instances(self, patch: Patch) -> List[oracle.TableInstance]:
        g = build_graph(patch)
        pairs = adjacent_pairs(g, self.target)
        return [oracle.TableInstance(self.labels(patch, g, swap), pairs)
                for swap in self.swaps()]

    def swaps(self) -> Tuple[bool, ...]:
        return (False,)

    def make_table(self, entries: Dict[Hashable, int], provenance: str) -> ColourTable:
        return ColourTable.build(self, entries, provenance)

    def apply(self, patch: Patch, table: ColourTable, g: Optional[TilingGraph] = None) -> Colouring:
        if patch.tiling != self.tiling:
            raise ColouringError(f"scheme {self.name} is for {self.tiling}, not {patch.tiling}")
        g = g or build_graph(patch)
        out = []
        for kind, val in self.labels(patch, g):
            out.append(val if kind == "fixed" else None if kind == "free" else table.lookup(val))
        return Colouring(self.target, tuple(out), self.palette, ((table.scheme, table.provenance),))

    def check(self, patch: Patch, table: ColourTable) -> ColouringReport:
        g = build_graph(patch)
        return verify_colouring(g, self.apply(patch, table, g))


# -- chair -----------------------------------------------------------------

# Children of a chair supertile in rule order: 0 bottom-left, 1 bottom-right,
# 2 centre, 3 top-left (in the supertile's own frame).
CHAIR_FACE_FIGURE = {
    # supertile turned 0 or 180 degrees
    1: (RED, BLUE, GREEN, BLUE), 3: (RED, BLUE, GREEN, BLUE),
    # supertile turned 90 or 270 degrees
    2: (BLUE, RED, GREEN, RED), 4: (BLUE, RED, GREEN, RED),
}


class ChairFaceScheme(TableScheme):
    """Colour of a chair = f(orientation of its level-1 supertile, child index)."""

    name = "chair-face"
    tiling = "chair"
    target = "face"
    level = 1

    def __init__(self, use_figure: bool = True) -> None:
        self.use_figure = use_figure

    def labels(self, patch, g, swap=False):
        if patch.level < 1:
            raise ColouringError("the chair face scheme needs a patch of level >= 1")
        out = []
        for t in patch.tiles:
            parent = patch.supertile(t.path[:-1])
            out.append(("key", (parent.orientation, t.path[-1])))
        return out

    def given_entries(self):
        if not self.use_figure:
            return {}
        return {(o, i): c for o, cs in CHAIR_FACE_FIGURE.items() for i, c in enumerate(cs)}


# -- composite schemes -----------------------------------------------------

@dataclass
class _CompositeContext:
    decomposition: Decomposition
    border: Tuple[int, ...]
    label: Tuple[Optional[int], ...]


def _on_segment(p: Vec2, a: Vec2, b: Vec2) -> bool:
    d = b - a
    w = p - a
    if d.cross(w):
        return False
    t = d.dot(w)
    return t.sign() >= 0 and (t - d.dot(d)).sign() <= 0


def composite_border(g: TilingGraph, dec: Decomposition, include_unpaired: bool = False) -> Tuple[int, ...]:
    """Edges separating composites, plus the patch boundary.

    With ``include_unpaired`` false, boundary edges on the hypotenuse of an
    unpaired half are left out, so that hypotenuse counts as composite interior.
    """
    site = dec.tile_site
    out = []
    for e, fs in enumerate(g.edge_faces):
        if len(fs) == 2:
            if site[fs[0]][0] != site[fs[1]][0]:
                out.append(e)
            continue
        hyp = dec.composites[site[fs[0]][0]].unpaired_hypotenuse
        if hyp is not None and not include_unpaired:
            u, v = g.edges[e]
            if _on_segment(g.vertices[u], *hyp) and _on_segment(g.vertices[v], *hyp):
                continue
        out.append(e)
    return tuple(out)


def composite_context(patch: Patch, g: TilingGraph, k: int,
                      include_unpaired: bool = False) -> _CompositeContext:
    dec = decompose(patch, k)
    border = composite_border(g, dec, include_unpaired)
    labels = bipartite_2colour(g, border).assignment
    return _CompositeContext(dec, border, labels)


def _pattern(g: TilingGraph, ctx: _CompositeContext, cid: int, swap: bool) -> int:
    comp = ctx.decomposition.composites[cid]
    v = g.point_index.get(comp.ref_point)
    lab = ctx.label[v] if v is not None else None
    if lab is None:
        raise StructuralError(f"reference corner of composite {cid} is not a border vertex")
    return lab ^ int(swap)


class CompositeVertexScheme(TableScheme):
    """Border vertices 2-coloured red/blue; interior vertices from a table.

    Key of an interior vertex of a complete composite: (composite kind,
    chirality, border label of the composite's reference corner, position)
    where the position is the least (slot, child path, corner index) among the
    composite's tiles that have the vertex as a corner.

    Interior vertices of unpaired halves on the patch boundary are labelled
    ``free``.  The missing partner would have split some of their edges, so
    the patch graph has adjacencies the tiling does not, and no border-fixed
    table can colour them in general.  :meth:`apply` completes them by exact
    search with everything else held fixed, widening the searched zone one
    graph layer at a time if needed.
    """

    target = "vertex"
    palette = 3

    def __init__(self, tiling: str, level: int, use_figures: bool = True) -> None:
        self.tiling = tiling
        self.level = level
        self.name = f"{tiling}-vertex"
        self.use_figures = use_figures

    def swaps(self):
        return (False, True)

    def given_entries(self):
        figures = VERTEX_FIGURES.get(self.tiling, ())
        if not (self.use_figures and figures):
            return {}
        return dict(_figure_entries_cached(self.tiling, self.level, FIGURE_SAMPLE_LEVEL))

    def labels(self, patch, g, swap=False):
        ctx = composite_context(patch, g, self.level)
        dec = ctx.decomposition
        vertex_face: Dict[int, int] = {}
        for f, cyc in enumerate(g.faces):
            for v in cyc:
                vertex_face.setdefault(v, f)
        positions: Dict[int, Dict[Vec2, tuple]] = {}
        out: List[Label] = []
        for v in range(g.n_vertices):
            lab = ctx.label[v]
            if lab is not None:
                out.append(("fixed", lab ^ int(swap)))
                continue
            cid = dec.tile_site[vertex_face[v]][0]
            comp = dec.composites[cid]
            if not all(h.real for h in comp.halves):
                out.append(("free", None))
                continue
            if cid not in positions:
                positions[cid] = _corner_positions(comp)
            try:
                pos = positions[cid][g.vertices[v]]
            except KeyError:
                raise StructuralError(f"vertex {v} is not a corner of its composite") from None
            out.append(("key", (comp.kind, comp.chirality, _pattern(g, ctx, cid, swap), pos)))
        return out

    def apply(self, patch, table, g=None):
        base = super().apply(patch, table, g)
        g = g or build_graph(patch)
        colours = list(base.assignment)
        completed = complete_by_search(g, colours, self.palette)
        return Colouring(self.target, tuple(colours), self.palette, base.tables_used,
                         tuple(completed))


def complete_by_search(g: TilingGraph, colours: List[Optional[int]], k: int,
                       limit: int = oracle.DEFAULT_LIMIT) -> List[int]:
    """Fill the ``None`` entries of a vertex colouring by exact search.

    The zone starts as the uncoloured vertices and grows by one graph layer
    whenever the zone cannot be coloured consistently with the fixed rest.
    Returns the sorted ids of all vertices the search assigned.
    """
    zone = {v for v, c in enumerate(colours) if c is None}
    if not zone:
        return []
    adj = g.adjacency
    while True:
        ids = sorted(zone)
        index = {v: i for i, v in enumerate(ids)}
        n = len(ids)
        anchors = list(range(n, n + k))
        edges = [(anchors[i], anchors[j]) for i in range(k) for j in range(i + 1, k)]
        for v in ids:
            for w in adj[v]:
                if w in index:
                    if v < w:
                        edges.append((index[v], index[w]))
                elif colours[w] is not None:
                    edges.extend((index[v], anchors[c]) for c in range(k) if c == colours[w])
        sol = oracle.k_colour(oracle.ColourProblem.from_edges(n + k, edges), k, limit)
        if sol is not None:
            back = {sol[anchors[c]]: c for c in range(k)}
            for v in ids:
                colours[v] = back[sol[index[v]]]
            return ids
        if len(zone) >= g.n_vertices:
            raise ColouringError("no proper completion exists")
        zone |= {w for v in ids for w in adj[v]}
        for v in zone:
            colours[v] = None


def _corner_positions(comp) -> Dict[Vec2, tuple]:
    best: Dict[Vec2, tuple] = {}
    for slot, half in enumerate(comp.halves):
        for _i, leaf, rel in half.leaves:
            for c, p in enumerate(leaf.polygon):
                cand = (slot, rel, c)
                if p not in best or cand < best[p]:
                    best[p] = cand
    return best


# -- vertex figures ----------------------------------------------------------

FigureNode = Tuple[float, float, int]

# Drawn 3-colourings of single composites: (x, y, colour) per vertex in the
# drawing's own coordinates (similar to, not equal to, patch coordinates).
# Any isometric copy can be matched against a composite of the same shape.
RP_VERTEX_FIGURES: Tuple[Tuple[FigureNode, ...], ...] = (
    ((4, 0, RED), (0, 0, BLUE), (0, 8, BLUE), (4, 8, RED), (2.4, 3.2, RED), (0.8, 6.4, RED),
     (2.4, 7.2, GREEN), (3.2, 1.6, BLUE), (1.6, 4.8, BLUE), (4, 4, BLUE), (0, 4, RED),
     (1.6, 0.8, GREEN)),
    ((4, 0, BLUE), (0, 0, RED), (0, 8, RED), (4, 8, BLUE), (2.4, 3.2, BLUE), (0.8, 6.4, BLUE),
     (2.4, 7.2, GREEN), (3.2, 1.6, RED), (1.6, 4.8, RED), (4, 4, RED), (0, 4, BLUE),
     (1.6, 0.8, GREEN)),
)

# Only the two rectangle drawings are usable for the pinwheel: the kite
# drawings place two differently coloured nodes on one point and omit one
# vertex, so kite entries are derived instead.
PINWHEEL_VERTEX_FIGURES: Tuple[Tuple[FigureNode, ...], ...] = (
    ((0, 0, RED), (4.47, 0, BLUE), (0, 8.94, RED), (0, 4.47, BLUE), (4.47, 8.94, BLUE),
     (4.47, 4.47, RED), (3.58, 1.79, RED), (1.79, 0.89, GREEN), (1.79, 5.37, RED),
     (0.89, 7.16, BLUE), (2.68, 3.58, BLUE), (2.68, 8.05, GREEN)),
    ((0, 0, BLUE), (4.47, 0, RED), (0, 8.94, BLUE), (3.58, 7.16, BLUE), (0, 4.47, RED),
     (1.79, 8.05, GREEN), (1.79, 3.58, BLUE), (4.47, 8.94, RED), (0.89, 1.79, RED),
     (4.47, 4.47, BLUE), (2.68, 5.37, RED), (2.68, 0.89, GREEN)),
)

VERTEX_FIGURES: Dict[str, Tuple[Tuple[FigureNode, ...], ...]] = {
    "rp": RP_VERTEX_FIGURES, "pinwheel": PINWHEEL_VERTEX_FIGURES}


def _match_figure(fig: Sequence[FigureNode], pts: Dict[int, complex],
                  tol: float) -> Optional[Dict[int, int]]:
    """A similarity carrying every figure node onto a distinct vertex, if any.

    Returns figure node index -> vertex id.  Candidates are tried in a fixed
    order (orientation-preserving maps first), so the result is deterministic.
    """
    if len(fig) != len(pts):
        return None
    z = [complex(x, y) for x, y, _c in fig]
    i0, i1 = max(((i, j) for i in range(len(z)) for j in range(i + 1, len(z))),
                 key=lambda ij: abs(z[ij[1]] - z[ij[0]]))
    span = abs(z[i1] - z[i0])
    ids = sorted(pts)
    for mirror in (False, True):
        src = [w.conjugate() for w in z] if mirror else z
        for u in ids:
            for v in ids:
                if u == v:
                    continue
                a = (pts[v] - pts[u]) / (src[i1] - src[i0])
                b = pts[u] - a * src[i0]
                image: Dict[int, int] = {}
                for n, w in enumerate(src):
                    target = a * w + b
                    hit = [q for q in ids if abs(pts[q] - target) <= tol * abs(a) * span]
                    if len(hit) != 1 or hit[0] in image.values():
                        break
                    image[n] = hit[0]
                else:
                    return image
    return None


def figure_vertex_entries(scheme: "CompositeVertexScheme", figures: Sequence[Sequence[FigureNode]],
                          patch: Patch, tol: float = 0.01) -> Dict[Hashable, int]:
    """Table entries read off drawn composite colourings.

    For each composite class (kind, chirality, border pattern) met in
    ``patch``, the first drawing that maps onto a complete composite of that
    class by a similarity, with border colours equal to the border labels up
    to a red/blue swap, supplies the colours of that class's interior keys.
    Classes no drawing fits get no entries.
    """
    g = build_graph(patch)
    labels = scheme.labels(patch, g)
    ctx = composite_context(patch, g, scheme.level)
    dec = ctx.decomposition
    members: Dict[int, set] = defaultdict(set)
    for f, cyc in enumerate(g.faces):
        members[dec.tile_site[f][0]].update(cyc)
    entries: Dict[Hashable, int] = {}
    done = set()
    for cid, comp in enumerate(dec.composites):
        if not all(h.real for h in comp.halves):
            continue
        vs = members[cid]
        keys = {v: labels[v][1] for v in vs if labels[v][0] == "key"}
        if not keys:
            continue
        cls = next(iter(keys.values()))[:3]
        if cls in done:
            continue
        pts = {v: complex(*g.vertices[v].to_float()) for v in vs}
        for fig in figures:
            image = _match_figure(fig, pts, tol)
            if image is None:
                continue
            swaps = {fig[n][2] ^ labels[v][1] for n, v in image.items() if labels[v][0] == "fixed"}
            if len(swaps) != 1 or not swaps <= {0, 1}:
                continue
            s = swaps.pop()
            for n, v in image.items():
                if v in keys:
                    c = fig[n][2]
                    entries[keys[v]] = c ^ s if c != GREEN else c
            done.add(cls)
            break
    return entries


# Level of the patch whose composites are matched against the drawings; it
# contains every composite class of the rp and pinwheel level-1 schemes.
FIGURE_SAMPLE_LEVEL = 4


@functools.lru_cache(maxsize=None)
def _figure_entries_cached(tiling: str, level: int, sample_level: int) -> Tuple[Tuple[Hashable, int], ...]:
    scheme = CompositeVertexScheme(tiling, level, use_figures=False)
    entries = figure_vertex_entries(scheme, VERTEX_FIGURES[tiling], generate_patch(tiling, sample_level))
    return tuple(sorted(entries.items(), key=lambda kv: key_order(kv[0])))


class CompositeFaceScheme(TableScheme):
    """Face colour = f(composite kind, chirality, border label, slot, child path)."""

    target = "face"
    palette = 3

    def __init__(self, tiling: str, level: int) -> None:
        self.tiling = tiling
        self.level = level
        self.name = f"{tiling}-face"

    def swaps(self):
        return (False, True)

    def labels(self, patch, g, swap=False):
        ctx = composite_context(patch, g, self.level)
        dec = ctx.decomposition
        pattern: Dict[int, int] = {}
        out: List[Label] = []
        for f in range(g.n_faces):
            cid, slot, rel = dec.tile_site[f]
            if cid not in pattern:
                pattern[cid] = _pattern(g, ctx, cid, swap)
            comp = dec.composites[cid]
            out.append(("key", (comp.kind, comp.chirality, pattern[cid], slot, rel)))
        return out


# -- rp faces: the two level-2 rectangles ------------------------------------

# Colours of the 50 tiles of each axis-parallel level-2 rectangle, keyed by
# the tile's corners relative to the rectangle's lower-left corner (tile legs
# 2 and 4).  "V" is the upright rectangle (10 wide, 20 tall), "H" the lying one.
RP_FACE_FIGURE: Dict[str, Tuple[Tuple[int, Tuple[Tuple[int, int], ...]], ...]] = {
    "V": (
        (GREEN, ((0, 0), (0, 2), (4, 2))), (BLUE, ((0, 0), (4, 0), (4, 2))),
        (RED, ((0, 2), (0, 6), (2, 2))), (BLUE, ((0, 6), (0, 10), (2, 6))),
        (GREEN, ((0, 6), (2, 2), (2, 6))), (GREEN, ((0, 10), (0, 12), (4, 12))),
        (GREEN, ((0, 10), (2, 6), (2, 10))), (RED, ((0, 10), (4, 10), (4, 12))),
        (RED, ((0, 12), (0, 16), (2, 12))), (BLUE, ((0, 16), (0, 20), (2, 16))),
        (GREEN, ((0, 16), (2, 12), (2, 16))), (RED, ((0, 20), (2, 16), (2, 20))),
        (RED, ((2, 2), (2, 6), (4, 2))), (BLUE, ((2, 6), (2, 10), (4, 6))),
        (GREEN, ((2, 6), (4, 2), (4, 6))), (GREEN, ((2, 10), (4, 6), (4, 10))),
        (BLUE, ((2, 12), (2, 16), (4, 12))), (GREEN, ((2, 16), (2, 18), (6, 18))),
        (GREEN, ((2, 16), (4, 12), (4, 16))), (RED, ((2, 16), (6, 16), (6, 18))),
        (GREEN, ((2, 18), (2, 20), (6, 20))), (RED, ((2, 18), (6, 18), (6, 20))),
        (GREEN, ((4, 0), (4, 2), (8, 2))), (RED, ((4, 0), (8, 0), (8, 2))),
        (RED, ((4, 2), (4, 4), (8, 4))), (BLUE, ((4, 2), (8, 2), (8, 4))),
        (BLUE, ((4, 4), (4, 8), (6, 4))), (BLUE, ((4, 8), (4, 12), (6, 8))),
        (GREEN, ((4, 8), (6, 4), (6, 8))), (RED, ((4, 12), (4, 16), (6, 12))),
        (GREEN, ((4, 12), (6, 8), (6, 12))), (GREEN, ((4, 16), (6, 12), (6, 16))),
        (BLUE, ((6, 4), (6, 8), (8, 4))), (BLUE, ((6, 8), (6, 10), (10, 10))),
        (GREEN, ((6, 8), (8, 4), (8, 8))), (RED, ((6, 8), (10, 8), (10, 10))),
        (RED, ((6, 10), (6, 14), (8, 10))), (BLUE, ((6, 14), (6, 18), (8, 14))),
        (GREEN, ((6, 14), (8, 10), (8, 14))), (BLUE, ((6, 18), (6, 20), (10, 20))),
        (GREEN, ((6, 18), (8, 14), (8, 18))), (RED, ((6, 18), (10, 18), (10, 20))),
        (GREEN, ((8, 0), (8, 4), (10, 0))), (RED, ((8, 4), (8, 8), (10, 4))),
        (BLUE, ((8, 4), (10, 0), (10, 4))), (GREEN, ((8, 8), (10, 4), (10, 8))),
        (RED, ((8, 10), (8, 14), (10, 10))), (RED, ((8, 14), (8, 18), (10, 14))),
        (BLUE, ((8, 14), (10, 10), (10, 14))), (GREEN, ((8, 18), (10, 14), (10, 18))),
    ),
    "H": (
        (GREEN, ((0, 0), (0, 2), (4, 2))), (BLUE, ((0, 0), (4, 0), (4, 2))),
        (RED, ((0, 2), (0, 6), (2, 2))), (BLUE, ((0, 6), (0, 10), (2, 6))),
        (GREEN, ((0, 6), (2, 2), (2, 6))), (RED, ((0, 10), (2, 6), (2, 10))),
        (BLUE, ((2, 2), (2, 6), (4, 2))), (GREEN, ((2, 6), (2, 8), (6, 8))),
        (RED, ((2, 6), (4, 2), (4, 6))), (BLUE, ((2, 6), (6, 6), (6, 8))),
        (GREEN, ((2, 8), (2, 10), (6, 10))), (RED, ((2, 8), (6, 8), (6, 10))),
        (GREEN, ((4, 0), (4, 2), (8, 2))), (RED, ((4, 0), (8, 0), (8, 2))),
        (GREEN, ((4, 2), (4, 4), (8, 4))), (BLUE, ((4, 2), (8, 2), (8, 4))),
        (GREEN, ((4, 4), (4, 6), (8, 6))), (RED, ((4, 4), (8, 4), (8, 6))),
        (GREEN, ((6, 6), (6, 8), (10, 8))), (RED, ((6, 6), (10, 6), (10, 8))),
        (BLUE, ((6, 8), (6, 10), (10, 10))), (RED, ((6, 8), (10, 8), (10, 10))),
        (GREEN, ((8, 0), (8, 4), (10, 0))), (GREEN, ((8, 4), (8, 6), (12, 6))),
        (RED, ((8, 4), (10, 0), (10, 4))), (BLUE, ((8, 4), (12, 4), (12, 6))),
        (GREEN, ((10, 0), (10, 2), (14, 2))), (BLUE, ((10, 0), (14, 0), (14, 2))),
        (GREEN, ((10, 2), (10, 4), (14, 4))), (BLUE, ((10, 2), (14, 2), (14, 4))),
        (BLUE, ((10, 6), (10, 10), (12, 6))), (RED, ((10, 10), (12, 6), (12, 10))),
        (GREEN, ((12, 4), (12, 6), (16, 6))), (BLUE, ((12, 4), (16, 4), (16, 6))),
        (GREEN, ((12, 6), (12, 8), (16, 8))), (BLUE, ((12, 6), (16, 6), (16, 8))),
        (GREEN, ((12, 8), (12, 10), (16, 10))), (RED, ((12, 8), (16, 8), (16, 10))),
        (GREEN, ((14, 0), (14, 2), (18, 2))), (RED, ((14, 0), (18, 0), (18, 2))),
        (GREEN, ((14, 2), (14, 4), (18, 4))), (RED, ((14, 2), (18, 2), (18, 4))),
        (RED, ((16, 4), (16, 8), (18, 4))), (BLUE, ((16, 8), (16, 10), (20, 10))),
        (GREEN, ((16, 8), (18, 4), (18, 8))), (RED, ((16, 8), (20, 8), (20, 10))),
        (GREEN, ((18, 0), (18, 4), (20, 0))), (RED, ((18, 4), (18, 8), (20, 4))),
        (BLUE, ((18, 4), (20, 0), (20, 4))), (GREEN, ((18, 8), (20, 4), (20, 8))),
    ),
}


def _int_point(p: Vec2) -> Tuple[int, int]:
    if not (p.x.is_rational and p.y.is_rational and p.x.k == 0 and p.y.k == 0):
        raise StructuralError(f"rp rectangle corner {p!r} is not an integer point")
    return (p.x.a, p.y.a)


class RPFaceScheme(TableScheme):
    """Face colour = f(upright or lying level-2 rectangle, tile position in it).

    Level-2 supertiles pair into axis-parallel rectangles; a tile's key is the
    rectangle's orientation and the tile's corners relative to the
    rectangle's lower-left corner.  Unpaired halves use the rectangle
    completed by their virtual partner, so the key does not depend on the
    patch boundary.
    """

    name = "rp-face"
    tiling = "rp"
    target = "face"
    level = 2
    palette = 3

    def __init__(self, use_figure: bool = True) -> None:
        self.use_figure = use_figure

    def labels(self, patch, g, swap=False):
        dec = decompose(patch, self.level)
        frames: Dict[int, Tuple[str, int, int]] = {}
        for cid, comp in enumerate(dec.composites):
            if comp.kind != "rect":
                raise StructuralError(f"rp composite {cid} is a {comp.kind}, not a rectangle")
            pts = [_int_point(p) for h in comp.halves for _i, leaf, _r in h.leaves for p in leaf.polygon]
            xs, ys = [p[0] for p in pts], [p[1] for p in pts]
            upright = max(ys) - min(ys) > max(xs) - min(xs)
            frames[cid] = ("V" if upright else "H", min(xs), min(ys))
        out: List[Label] = []
        for f, t in enumerate(patch.tiles):
            o, x0, y0 = frames[dec.tile_site[f][0]]
            corners = tuple(sorted((x - x0, y - y0) for x, y in map(_int_point, t.polygon)))
            out.append(("key", (o, corners)))
        return out

    def given_entries(self):
        if not self.use_figure:
            return {}
        return {(o, poly): c for o, tiles in RP_FACE_FIGURE.items() for c, poly in tiles}


def hypotenuse_runs(patch: Patch, g: TilingGraph, colouring: Colouring) -> List[Tuple[str, Tuple[int, ...]]]:
    """Colours along every level-1 hypotenuse on the sides of each rp rectangle.

    Each side of a level-2 rectangle is walked clockwise and cut into level-1
    hypotenuses (length 5 in tile-leg units of 1 and 2).  Returns, per
    hypotenuse, its type ("I" on the bottom or left side, "II" on the top or
    right side) and the colours of the tiles along it in walking order.
    Only rectangles whose halves both lie in the patch are reported.
    """
    dec = decompose(patch, 2)
    runs: List[Tuple[str, Tuple[int, ...]]] = []
    for cid, comp in enumerate(dec.composites):
        if not all(h.real for h in comp.halves):
            continue
        faces = [i for h in comp.halves for i, _l, _r in h.leaves]
        pts = [_int_point(p) for f in faces for p in patch.tiles[f].polygon]
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
        # clockwise: left side upwards, top rightwards, right downwards, bottom leftwards
        sides = (("I", (x0, y0), (0, 1), y1 - y0), ("II", (x0, y1), (1, 0), x1 - x0),
                 ("II", (x1, y1), (0, -1), y1 - y0), ("I", (x1, y0), (-1, 0), x1 - x0))
        for kind, (sx, sy), (dx, dy), length in sides:
            along: List[Tuple[int, int]] = []
            for f in faces:
                cs = [_int_point(p) for p in patch.tiles[f].polygon]
                ts = [(x - sx) * dx + (y - sy) * dy for x, y in cs
                      if (x - sx) * dy - (y - sy) * dx == 0]
                if len(ts) == 2:
                    along.append((min(ts), f))
            along.sort()
            unit = length // (len(along) // 3) if along else 0
            for start in range(0, len(along), 3):
                chunk = along[start:start + 3]
                if unit * start // 3 != chunk[0][0]:
                    raise StructuralError(f"rectangle {cid}: side is not a sequence of hypotenuses")
                runs.append((kind, tuple(colouring.assignment[f] for _t, f in chunk)))
    return runs


# ---------------------------------------------------------------------------
# Standard schemes and tables

@dataclass(frozen=True)
class SchemeSpec:
    """A scheme with the patches its table is trained and verified on."""

    factory: object
    training: Tuple[Tuple[int, Optional[str]], ...]       # (level, seed kind)
    verification: Tuple[Tuple[int, Optional[str]], ...]

    def scheme(self) -> TableScheme:
        return self.factory()  # type: ignore[operator]


_AB_KINDS = ("ab-triangle", "ab-rhombus")

SCHEMES: Dict[Tuple[str, str], SchemeSpec] = {
    ("chair", "face"): SchemeSpec(ChairFaceScheme, ((3, None),), ((5, None),)),
    ("rp", "face"): SchemeSpec(RPFaceScheme, ((4, None),), ((6, None),)),
    ("pinwheel", "face"): SchemeSpec(lambda: CompositeFaceScheme("pinwheel", 1),
                                     ((4, None),), ((6, None),)),
    ("ab", "vertex"): SchemeSpec(lambda: CompositeVertexScheme("ab", 2),
                                 tuple((L, k) for L in (3, 4) for k in _AB_KINDS),
                                 tuple((5, k) for k in _AB_KINDS)),
    ("rp", "vertex"): SchemeSpec(lambda: CompositeVertexScheme("rp", 1),
                                 ((4, None),), ((5, None), (6, None))),
    ("pinwheel", "vertex"): SchemeSpec(lambda: CompositeVertexScheme("pinwheel", 1),
                                       ((4, None),), ((5, None), (6, None))),
}


def scheme_for(tiling: str, target: str) -> TableScheme:
    try:
        return SCHEMES[(tiling, target)].scheme()
    except KeyError:
        raise ColouringError(f"no table scheme colours the {target}s of {tiling}") from None


@functools.lru_cache(maxsize=None)
def standard_table(tiling: str, target: str) -> ColourTable:
    """The table of the standard scheme, derived once per process.

    Given entries are fixed first, the rest is the lexicographically smallest
    completion that is proper on the training patches; the result is then
    re-verified on the larger verification patches.
    """
    spec = SCHEMES.get((tiling, target))
    if spec is None:
        raise ColouringError(f"no table scheme colours the {target}s of {tiling}")
    train = [generate_patch(tiling, L, kind=k) for L, k in spec.training]
    verify = [generate_patch(tiling, L, kind=k) for L, k in spec.verification]
    return oracle.derive_colour_table(spec.scheme(), train, verify)


def hierarchical_face_colour(patch: Patch, table: Optional[ColourTable] = None,
                             g: Optional[TilingGraph] = None) -> Colouring:
    """3-colour the faces of a chair, rp or pinwheel patch from a supertile table."""
    scheme = scheme_for(patch.tiling, "face")
    table = table or standard_table(patch.tiling, "face")
    return scheme.apply(patch, table, g)


def supertile_border_vertex_colour(patch: Patch, g: Optional[TilingGraph] = None,
                                   scheme: Optional[TableScheme] = None,
                                   table: Optional[ColourTable] = None) -> Colouring:
    """3-colour the vertices of an ab, rp or pinwheel patch.

    Composite borders get red and blue by breadth-first 2-colouring; interior
    vertices come from the scheme's table, which only uses green where it
    must.  Raises :class:`OddCycleError` if a border is not bipartite.
    """
    scheme = scheme or scheme_for(patch.tiling, "vertex")
    if table is None:
        table = standard_table(patch.tiling, "vertex")
    return scheme.apply(patch, table, g)


def paper_colouring(patch: Patch, target: str, g: Optional[TilingGraph] = None) -> Colouring:
    """The constructive colouring for one tiling and target."""
    g = g or build_graph(patch)
    t = patch.tiling
    if target == "vertex":
        return bipartite_2colour(g) if t == "chair" else supertile_border_vertex_colour(patch, g)
    if target == "edge":
        return pinwheel_coset_edge_colour(g) if t == "pinwheel" else directional_edge_colour(g)
    if target == "face":
        return ab_face_2colour(patch) if t == "ab" else hierarchical_face_colour(patch, g=g)
    raise ValueError(f"unknown target {target!r}")
