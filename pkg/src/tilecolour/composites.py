"""Composite tiles: level-k supertiles paired along their hypotenuses.

The vertex and face colouring schemes for ab, rp and pinwheel work on
composites rather than on single supertiles.

* rp / pinwheel: two triangle supertiles sharing a hypotenuse form a
  rectangle ("rect", same chirality, related by a half turn) or a kite
  ("kite", mirror images across the shared hypotenuse).
* ab: two triangle supertiles sharing a hypotenuse form a square; rhombus
  supertiles stand alone.

A triangle supertile whose partner lies outside the patch is completed with a
*virtual* partner, generated by substitution but never coloured.  Virtual
halves make the position ids of the real half independent of whether its
partner happens to be inside the patch.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .exactgeom import Transform, Vec2
from .substitution import Patch, TileInstance, _dir8, make_tile, substitute_once

Path = Tuple[int, ...]


class CompositeError(RuntimeError):
    """The patch does not decompose into composites as expected."""


@dataclass(frozen=True)
class Half:
    """One supertile of a composite, real (inside the patch) or virtual."""

    supertile: TileInstance
    real: bool
    leaves: Tuple[Tuple[int, TileInstance, Path], ...]   # (tile index or -1, leaf, relative path)

    @property
    def anchors(self) -> Dict[str, Vec2]:
        """Named corners: R/S/L (+ leg midpoint M) for triangles, 0..3 for rhombi."""
        poly = self.supertile.polygon
        kind = self.supertile.kind
        if kind in ("rp-triangle", "pinwheel-triangle"):
            r, s, l = poly
            return {"R": r, "S": s, "L": l, "M": Vec2((r.x + l.x).half(), (r.y + l.y).half())}
        if kind == "ab-triangle":
            return {"A": poly[0], "B": poly[1], "C": poly[2]}
        return {str(i): p for i, p in enumerate(poly)}


@dataclass(frozen=True)
class Composite:
    kind: str                     # rect | kite | square | rhombus
    chirality: int                # reflection flag of slot 0 (rect only, else 0)
    halves: Tuple[Half, ...]      # in slot order

    @property
    def ref_point(self) -> Vec2:
        """A corner that always lies in the patch; its border label fixes the pattern."""
        a = self.halves[0].anchors
        return a["S"] if "S" in a else a["A"] if "A" in a else a["0"]

    @property
    def unpaired_hypotenuse(self) -> Optional[Tuple[Vec2, Vec2]]:
        if len(self.halves) == 2 and not all(h.real for h in self.halves):
            return hypotenuse(next(h for h in self.halves if h.real).supertile)
        return None


@dataclass(frozen=True)
class Decomposition:
    patch: Patch
    level: int
    composites: Tuple[Composite, ...]
    tile_site: Tuple[Tuple[int, int, Path], ...]   # per tile: (composite id, slot, relative path)


def hypotenuse(t: TileInstance) -> Tuple[Vec2, Vec2]:
    poly = t.polygon
    if t.kind == "ab-triangle":
        return poly[0], poly[1]
    if t.kind in ("rp-triangle", "pinwheel-triangle"):
        return poly[1], poly[2]
    raise CompositeError(f"{t.kind} has no hypotenuse")


def _first_nonzero_positive(t: Transform) -> bool:
    (a, b), (c, d) = t.linear
    for x in (a, c, b, d):
        s = x.sign()
        if s:
            return s > 0
    raise CompositeError("singular placement")


def virtual_partner(t: TileInstance) -> TileInstance:
    """The supertile completing ``t`` across its hypotenuse.

    rp/pinwheel: the half-turn about the hypotenuse midpoint (a rectangle);
    ab: the mirror image across the hypotenuse line (a square).
    """
    p, q = hypotenuse(t)
    if t.kind == "ab-triangle":
        # reflection across the line through p at 45j degrees: the matrix
        # entries are cos(90j), sin(90j) and so lie in {0, 1, -1}
        j = _dir8((q - p).x, (q - p).y)
        c2, s2 = ((1, 0), (0, 1), (-1, 0), (0, -1))[j % 4]
        refl = Transform(((c2, s2), (s2, -c2)))
        about = Transform.translate(p).compose(refl).compose(Transform.translate(-p))
        return make_tile(t.kind, about.compose(t.transform), ())
    half_turn = Transform(((-1, 0), (0, -1)), p + q)
    return make_tile(t.kind, half_turn.compose(t.transform), ())


def _subtree(t: TileInstance, depth: int) -> List[Tuple[TileInstance, Path]]:
    layer = [(make_tile(t.kind, t.transform, ()), ())]
    for _ in range(depth):
        nxt = []
        for tile, _rel in layer:
            for kid in substitute_once(tile):
                nxt.append((kid, kid.path))
        layer = nxt
    return layer


def decompose(patch: Patch, k: int) -> Decomposition:
    """Group the patch's level-k supertiles into composites (with virtual halves)."""
    if patch.tiling == "chair":
        raise CompositeError("chair tiles have no composite structure")
    if not 0 <= k <= patch.level:
        raise CompositeError(f"level {k} outside 0..{patch.level}")
    depth = patch.level - k
    groups: Dict[Path, List[int]] = defaultdict(list)
    for i, t in enumerate(patch.tiles):
        groups[t.path[:depth]].append(i)
    prefixes = sorted(groups)
    supers = {p: patch.supertile(p) for p in prefixes}

    def real_half(p: Path) -> Half:
        leaves = tuple((i, patch.tiles[i], patch.tiles[i].path[depth:]) for i in groups[p])
        return Half(supers[p], True, leaves)

    by_hyp: Dict[frozenset, List[Path]] = defaultdict(list)
    for p in prefixes:
        if supers[p].kind != "ab-rhombus":
            by_hyp[frozenset(hypotenuse(supers[p]))].append(p)

    composites: List[Tuple[int, Composite]] = []
    done = set()
    for p in prefixes:
        if p in done:
            continue
        t = supers[p]
        if t.kind == "ab-rhombus":
            composites.append((groups[p][0], Composite("rhombus", 0, (real_half(p),))))
            done.add(p)
            continue
        mates = [q for q in by_hyp[frozenset(hypotenuse(t))] if q != p]
        if len(mates) > 1:
            raise CompositeError(f"three supertiles share the hypotenuse of {p}")
        halves = [real_half(p)]
        done.add(p)
        if mates:
            halves.append(real_half(mates[0]))
            done.add(mates[0])
        else:
            v = virtual_partner(t)
            leaves = tuple((-1, leaf, rel) for leaf, rel in _subtree(v, k))
            halves.append(Half(v, False, leaves))
        a, b = halves
        if t.kind == "ab-triangle":
            if a.supertile.reflected == b.supertile.reflected:
                raise CompositeError(f"ab triangles at {p} pair without mirroring")
            kind, chir = "square", 0
            halves.sort(key=lambda h: h.supertile.reflected)
        elif a.supertile.reflected == b.supertile.reflected:
            kind, chir = "rect", int(a.supertile.reflected)
            halves.sort(key=lambda h: not _first_nonzero_positive(h.supertile.transform))
        else:
            kind, chir = "kite", 0
            halves.sort(key=lambda h: h.supertile.reflected)
        first = min(i for h in halves if h.real for i, _, _ in h.leaves)
        composites.append((first, Composite(kind, chir, tuple(halves))))

    composites.sort(key=lambda x: x[0])
    comps = tuple(c for _, c in composites)
    site: List[Optional[Tuple[int, int, Path]]] = [None] * len(patch.tiles)
    for cid, comp in enumerate(comps):
        for slot, h in enumerate(comp.halves):
            for i, _leaf, rel in h.leaves:
                if i >= 0:
                    site[i] = (cid, slot, rel)
    assert all(s is not None for s in site)
    return Decomposition(patch, k, comps, tuple(site))  # type: ignore[arg-type]
