"""Exact colouring decisions, odd-cycle witnesses and colour-table search."""
from __future__ import annotations

import hashlib
import heapq
import json
from collections import deque
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .planargraph import TilingGraph, dual_graph

DEFAULT_LIMIT = 20_000


class OracleLimitError(RuntimeError):
    """The problem is larger than the configured limit; no answer is given."""


class NoTableError(RuntimeError):
    """No colour table with the requested key structure exists."""


@dataclass(frozen=True)
class ColourProblem:
    """A simple loop-free graph given by sorted adjacency tuples."""

    adjacency: Tuple[Tuple[int, ...], ...]
    mode: str = "vertex"

    def __post_init__(self) -> None:
        for v, nbrs in enumerate(self.adjacency):
            if v in nbrs:
                raise ValueError(f"loop at {v}")

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    def digest(self) -> str:
        blob = json.dumps([self.mode, [list(a) for a in self.adjacency]], separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]], mode: str = "vertex") -> "ColourProblem":
        adj: List[set] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(tuple(tuple(sorted(a)) for a in adj), mode)


def line_graph(n_vertices: int, edges: Sequence[Tuple[int, int]]) -> ColourProblem:
    """Edges become nodes; two are adjacent when they share an endpoint."""
    inc: List[List[int]] = [[] for _ in range(n_vertices)]
    for e, (u, v) in enumerate(edges):
        inc[u].append(e)
        inc[v].append(e)
    pairs = set()
    for es in inc:
        for i in range(len(es)):
            for j in range(i + 1, len(es)):
                a, b = es[i], es[j]
                pairs.add((a, b) if a < b else (b, a))
    return ColourProblem.from_edges(len(edges), sorted(pairs), "edge")


def problem_from_graph(g: TilingGraph, mode: str) -> ColourProblem:
    if mode == "vertex":
        return ColourProblem(g.adjacency, "vertex")
    if mode == "edge":
        return line_graph(g.n_vertices, g.edges)
    if mode == "face":
        return ColourProblem(dual_graph(g), "face")
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Bipartiteness with witnesses

def bipartite_or_witness(problem: ColourProblem) -> Tuple[Optional[List[int]], Optional[List[int]]]:
    """Return ``(colouring, None)`` if bipartite, else ``(None, odd_cycle)``.

    Breadth-first layering from the minimum vertex of each component; the
    odd cycle is closed through the lowest common ancestor of a conflicting
    edge and listed as a vertex sequence.
    """
    adj = problem.adjacency
    colour = [-1] * problem.n
    parent = [-1] * problem.n
    depth = [0] * problem.n
    for root in range(problem.n):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        q = deque([root])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if colour[w] < 0:
                    colour[w] = 1 - colour[u]
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    q.append(w)
                elif colour[w] == colour[u]:
                    return None, _odd_cycle(u, w, parent, depth)
    return colour, None


def _odd_cycle(u: int, w: int, parent: List[int], depth: List[int]) -> List[int]:
    left, right = [u], [w]
    a, b = u, w
    while depth[a] > depth[b]:
        a = parent[a]
        left.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        right.append(b)
    while a != b:
        a = parent[a]
        b = parent[b]
        left.append(a)
        right.append(b)
    right.pop()
    return left + right[::-1]


def is_cycle(problem: ColourProblem, cycle: Sequence[int]) -> bool:
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        return False
    adj = problem.adjacency
    return all(cycle[(i + 1) % len(cycle)] in adj[cycle[i]] for i in range(len(cycle)))


def find_triangle(problem: ColourProblem) -> Optional[Tuple[int, int, int]]:
    """Lexicographically smallest triangle, or None."""
    adj = problem.adjacency
    sets = [set(a) for a in adj]
    for u in range(problem.n):
        for v in adj[u]:
            if v <= u:
                continue
            common = [w for w in adj[v] if w > v and w in sets[u]]
            if common:
                return (u, v, common[0])
    return None


# ---------------------------------------------------------------------------
# Exact k-colourability by DSATUR-ordered backtracking

def k_colour(problem: ColourProblem, k: int, limit: int = DEFAULT_LIMIT) -> Optional[List[int]]:
    """A proper colouring with colours ``< k`` or None if none exists.

    Backtracking with conflict-directed backjumping.  The next vertex is the
    uncoloured one with the most distinct neighbour colours, then the most
    coloured neighbours (which keeps the search on a connected frontier),
    then the highest degree, then the smallest id.  On a dead end the search
    jumps straight back to the deepest assignment that caused it, so a wrong
    early choice in an unrelated region is never re-enumerated.
    """
    n = problem.n
    if n > limit:
        raise OracleLimitError(f"{n} elements exceed the oracle limit {limit}")
    if n == 0:
        return []
    if k <= 0:
        return None
    adj = problem.adjacency
    colour = [-1] * n
    counts = [[0] * k for _ in range(n)]   # coloured neighbours per colour
    sat = [0] * n
    near = [0] * n
    deg = [len(a) for a in adj]
    heap: List[Tuple[int, int, int, int]] = []
    depth_of = [-1] * n
    trail: List[int] = []          # vertex at each depth
    tried: List[List[bool]] = []   # colours already tried at each depth
    conflicts: List[set] = []      # conflict set (depths) of each depth

    def rebuild() -> None:
        heap[:] = [(-sat[v], -near[v], -deg[v], v) for v in range(n) if depth_of[v] < 0]
        heapq.heapify(heap)

    def pick() -> int:
        if len(heap) > 8 * n + 64:
            rebuild()
        while True:
            s, m, d, v = heap[0]
            if depth_of[v] >= 0:
                heapq.heappop(heap)
                continue
            if -s != sat[v] or -m != near[v]:
                heapq.heapreplace(heap, (-sat[v], -near[v], d, v))
                continue
            return v

    def assign(v: int, c: int) -> None:
        colour[v] = c
        for w in adj[v]:
            cw = counts[w]
            near[w] += 1
            if cw[c] == 0:
                sat[w] += 1
            cw[c] += 1
            if depth_of[w] < 0:
                heapq.heappush(heap, (-sat[w], -near[w], -deg[w], w))

    def unassign(v: int) -> None:
        c = colour[v]
        colour[v] = -1
        for w in adj[v]:
            cw = counts[w]
            near[w] -= 1
            cw[c] -= 1
            if cw[c] == 0:
                sat[w] -= 1

    def open_level(v: int) -> None:
        depth_of[v] = len(trail)
        trail.append(v)
        tried.append([False] * k)
        conflicts.append(set())

    def drop_level() -> None:
        v = trail.pop()
        tried.pop()
        conflicts.pop()
        if colour[v] >= 0:
            unassign(v)
        depth_of[v] = -1
        heapq.heappush(heap, (-sat[v], -near[v], -deg[v], v))

    rebuild()
    open_level(pick())
    while True:
        d = len(trail) - 1
        v = trail[d]
        if colour[v] >= 0:
            unassign(v)
        choice = -1
        mine = tried[d]
        for c in range(k):
            if mine[c]:
                continue
            if counts[v][c]:
                mine[c] = True
                for w in adj[v]:
                    if colour[w] == c:
                        conflicts[d].add(depth_of[w])
                        break
                continue
            choice = c
            break
        if choice < 0:
            conf = conflicts[d]
            if not conf:
                return None
            h = max(conf)
            merged = conf - {h}
            while len(trail) - 1 > h:
                drop_level()
            conflicts[h] |= merged
            continue
        mine[choice] = True
        assign(v, choice)
        if len(trail) == n:
            return colour[:]
        open_level(pick())


def clique_lower_bound(problem: ColourProblem) -> int:
    """Size of a clique found greedily around each vertex (a lower bound)."""
    adj = problem.adjacency
    sets = [set(a) for a in adj]
    best = 1 if problem.n else 0
    for v in range(problem.n):
        clique = [v]
        cand = set(adj[v])
        for w in sorted(adj[v], key=lambda x: (-len(adj[x]), x)):
            if w in cand:
                clique.append(w)
                cand &= sets[w]
        best = max(best, len(clique))
    return best


def exact_chromatic(problem: ColourProblem, limit: int = DEFAULT_LIMIT) -> Tuple[int, List[int]]:
    """Smallest k admitting a proper colouring, with a witness colouring."""
    if problem.n > limit:
        raise OracleLimitError(f"{problem.n} elements exceed the oracle limit {limit}")
    if problem.n == 0:
        return 0, []
    if not any(problem.adjacency):
        return 1, [0] * problem.n
    colours, _ = bipartite_or_witness(problem)
    if colours is not None:
        return 2, colours
    k = max(3, clique_lower_bound(problem))
    while True:
        witness = k_colour(problem, k, limit)
        if witness is not None:
            return k, witness
        k += 1


def brute_force_chromatic(problem: ColourProblem) -> int:
    """Reference chromatic number by plain enumeration (tiny graphs only)."""
    import itertools
    n = problem.n
    if n == 0:
        return 0
    edges = problem.edges()
    for k in range(1, n + 1):
        for assignment in itertools.product(range(k), repeat=n):
            if all(assignment[u] != assignment[v] for u, v in edges):
                return k
    return n


def certificate(problem: ColourProblem, chi: Optional[int], witness: Optional[List[int]] = None,
                odd_cycle: Optional[List[int]] = None, **extra) -> dict:
    cert = {"v": "v1", "problem_digest": problem.digest(), "mode": problem.mode,
            "elements": problem.n, "chi": chi}
    if witness is not None:
        cert["witness"] = list(witness)
    if odd_cycle is not None:
        cert["odd_cycle"] = list(odd_cycle)
    cert.update(extra)
    return cert


# ---------------------------------------------------------------------------
# Colour-table search

@dataclass
class TableInstance:
    """One labelled training graph for a keyed colouring scheme.

    ``labels[i]`` is ``("key", key)`` for an element whose colour comes from
    the table, ``("fixed", colour)`` for a precoloured element, or
    ``("free", None)`` for an element the table does not cover.
    """

    labels: List[Tuple[str, Hashable]]
    edges: List[Tuple[int, int]]


def table_constraints(instances: Sequence[TableInstance]):
    """Collect (keys, key-key conflicts, key-colour bans) from training graphs."""
    keys = set()
    pair_conflicts = set()
    banned: Dict[Hashable, set] = {}
    for inst in instances:
        for kind, val in inst.labels:
            if kind == "key":
                keys.add(val)
        for u, v in inst.edges:
            (ku, vu), (kv, vv) = inst.labels[u], inst.labels[v]
            if ku == "free" or kv == "free":
                continue
            if ku == "key" and kv == "key":
                if vu == vv:
                    raise NoTableError(f"adjacent elements share the key {vu!r}")
                pair_conflicts.add((vu, vv) if _kord(vu) < _kord(vv) else (vv, vu))
            elif ku == "key":
                banned.setdefault(vu, set()).add(vv)
            elif kv == "key":
                banned.setdefault(vv, set()).add(vu)
            elif vu == vv:
                raise NoTableError(f"two adjacent precoloured elements share colour {vu}")
    return keys, pair_conflicts, banned


def _kord(key):
    return json.dumps(key)


def solve_table(keys: Iterable[Hashable], conflicts: Iterable[Tuple[Hashable, Hashable]],
                banned: Dict[Hashable, set], palette: int,
                order: Optional[Sequence[Hashable]] = None) -> Dict[Hashable, int]:
    """Lexicographically smallest assignment key -> colour (keys in ``order``).

    The constraints form a graph on the keys plus a clique of ``palette``
    anchor nodes, one per colour; a banned colour is an edge to its anchor.
    :func:`k_colour` decides feasibility.  Keys are then fixed in order to the
    smallest colour that keeps the rest feasible, reusing the current witness
    whenever it already has that colour, so the exact search runs only when a
    smaller colour than the witness's is tried.
    """
    order = list(order) if order is not None else sorted(keys, key=_kord)
    pos = {k: i for i, k in enumerate(order)}
    n = len(order)
    anchors = list(range(n, n + palette))
    base = [(anchors[i], anchors[j]) for i in range(palette) for j in range(i + 1, palette)]
    for a, b in conflicts:
        base.append((pos[a], pos[b]))
    for k, cs in banned.items():
        if k in pos:
            base.extend((pos[k], anchors[c]) for c in cs if 0 <= c < palette)
    fixed: List[Tuple[int, int]] = []

    def solve(extra: List[Tuple[int, int]]) -> Optional[List[int]]:
        edges = list(base)
        for i, c in fixed + extra:
            edges.extend((i, anchors[d]) for d in range(palette) if d != c)
        sol = k_colour(ColourProblem.from_edges(n + palette, edges), palette, limit=max(DEFAULT_LIMIT, n + palette))
        if sol is None:
            return None
        back = {sol[anchors[c]]: c for c in range(palette)}
        return [back[sol[i]] for i in range(n)]

    witness = solve([])
    if witness is None:
        raise NoTableError("no colour table satisfies the training constraints")
    for i in range(n):
        for c in range(witness[i]):
            trial = solve([(i, c)])
            if trial is not None:
                witness = trial
                break
        fixed.append((i, witness[i]))
    return {k: witness[pos[k]] for k in order}


def _key_sort(keys):
    try:
        return sorted(keys)
    except TypeError:
        return sorted(keys, key=_kord)


def derive_colour_table(scheme, training, verification=None):
    """Lexicographically smallest colour table for ``scheme``.

    ``scheme`` supplies ``training_instances(patch)``, ``given_entries()``,
    ``palette``, ``make_table(entries, provenance)`` and
    ``check(patch, table)``.  ``training`` is a patch or a list of patches;
    the table is re-checked on ``verification`` (a patch or list) and
    rejected with :class:`NoTableError` if it is missing a key there or
    produces a conflict.
    """
    patches = training if isinstance(training, (list, tuple)) else [training]
    instances = []
    for p in patches:
        instances.extend(scheme.training_instances(p))
    keys, conflicts, banned = table_constraints(instances)
    given = scheme.given_entries()
    for key, c in given.items():
        if key in keys:
            banned.setdefault(key, set()).update(x for x in range(scheme.palette) if x != c)
    order = _key_sort(keys)
    assignment = solve_table(keys, conflicts, banned, scheme.palette, order)
    entries = dict(given)
    entries.update(assignment)
    provenance = "paper-given" if all(k in given for k in keys) else "derived"
    table = scheme.make_table(entries, provenance)
    if verification is not None:
        checks = verification if isinstance(verification, (list, tuple)) else [verification]
        for p in checks:
            try:
                report = scheme.check(p, table)
            except KeyError as exc:
                raise NoTableError(f"verification patch needs an entry absent from training: {exc}") from None
            if not report.proper:
                raise NoTableError(
                    f"table is improper on the level-{p.level} verification patch: "
                    f"{len(report.conflicts)} conflicts, first {report.conflicts[0]}")
    return table
