"""Prototiles, substitution rules and level-L patch generation.

Scale conventions (all coordinates stay exact):

* chair: unit lattice, the L-tromino drawn with 8 vertices (midpoints of the
  two long sides included).  Seed scaled by ``2**L``.
* ab: edge length 2, so every vertex lies in Z[sqrt2].  Seed scaled by
  ``(1 + sqrt2)**L``; the inverse inflation ``sqrt2 - 1`` is a ring unit.
* rp: right triangle with legs 2 and 4.  Seed linear part ``5**(L/2)`` for
  even L and ``5**((L-1)/2) * G * M`` for odd L (``G`` the x-axis reflection,
  ``M = [[2, 1], [-1, 2]]``), which keeps every leaf axis aligned and every
  hypotenuse parallel to (2, 1) or (-1, 2).
* pinwheel: same triangle; seed linear part ``5**L``.  Mixed chirality among
  the children rules out a smaller integral seed.

Child indices follow a fixed reading order of each rule: children sorted by
the centroid of their image in the inflated parent, bottom to top and then
left to right.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .exactgeom import (
    ONE,
    SQRT2,
    Scalar,
    Transform,
    Vec2,
    polygon_area2,
)

TILINGS = ("chair", "ab", "rp", "pinwheel")
DEFAULT_MAX_LEVEL = 7

LAMBDA = Scalar(1, 1)          # 1 + sqrt2, the AB inflation factor
LAMBDA_INV = Scalar(-1, 1)     # sqrt2 - 1
M_RP = Transform(((2, 1), (-1, 2)))     # figure-frame inflation of a canonical triangle
M_RP_ADJ = Transform(((2, -1), (1, 2)))  # adjugate: M^-1 = M_RP_ADJ / 5
G_REFLECT = Transform.reflect_x()


class SubstitutionError(ValueError):
    pass


@dataclass(frozen=True)
class PrototileDef:
    tiling: str
    kind: str
    polygon: Tuple[Vec2, ...]
    marker: str

    def __post_init__(self) -> None:
        if polygon_area2(self.polygon).sign() <= 0:
            raise SubstitutionError(f"{self.kind} polygon is not counterclockwise")


def _pts(*pairs) -> Tuple[Vec2, ...]:
    return tuple(Vec2(x, y) for x, y in pairs)


_S2 = SQRT2
PROTOTILES: Dict[str, PrototileDef] = {
    "chair": PrototileDef(
        "chair", "chair",
        _pts((0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2), (0, 1)),
        "none"),
    "ab-triangle": PrototileDef(
        "ab", "ab-triangle",
        (Vec2(0, 0), Vec2(2 * _S2, 0), Vec2(_S2, _S2)),
        "hypotenuse arrow from vertex 0 to vertex 1, interior on its left"),
    "ab-rhombus": PrototileDef(
        "ab", "ab-rhombus",
        (Vec2(0, 0), Vec2(2, 0), Vec2(2 + _S2, _S2), Vec2(_S2, _S2)),
        "none"),
    "rp-triangle": PrototileDef(
        "rp", "rp-triangle", _pts((0, 0), (2, 0), (0, 4)),
        "right angle at vertex 0; reflection flag from the placement determinant"),
    "pinwheel-triangle": PrototileDef(
        "pinwheel", "pinwheel-triangle", _pts((0, 0), (2, 0), (0, 4)),
        "right angle at vertex 0; reflection flag from the placement determinant"),
}

KINDS_BY_TILING = {
    "chair": ("chair",),
    "ab": ("ab-triangle", "ab-rhombus"),
    "rp": ("rp-triangle",),
    "pinwheel": ("pinwheel-triangle",),
}


def tiling_of(kind: str) -> str:
    try:
        return PROTOTILES[kind].tiling
    except KeyError:
        raise SubstitutionError(f"unknown prototile kind {kind!r}") from None


# ---------------------------------------------------------------------------
# Rules: for each parent kind, a list of (child kind, placement) in the
# inflated parent frame.  The deflation back to the parent frame is done in
# _child_transform.

def _place(t: Tuple, rot45: int = 0, mirror: bool = False) -> Transform:
    base = Transform.rotation45(rot45)
    if mirror:
        base = base.compose(Transform.reflect_x())
    return Transform.translate(Vec2(*t)).compose(base)


def _tri_frame(r, s, l) -> Transform:
    """Signed permutation placing the canonical triangle at (R, S-end, L-end)."""
    (rx, ry), (sx, sy), (lx, ly) = r, s, l
    e1 = ((sx - rx) // 2, (sy - ry) // 2)
    e2 = ((lx - rx) // 4, (ly - ry) // 4)
    return Transform(((e1[0], e2[0]), (e1[1], e2[1])), Vec2(rx, ry))


_FIG_ORIGIN = Transform.translate(Vec2(-8, -2))  # right angle of the inflated parent

_RAW_RULES: Dict[str, List[Tuple[str, Transform]]] = {
    "chair": [
        ("chair", Transform.identity()),
        ("chair", Transform.translate(Vec2(1, 1))),
        ("chair", _place((4, 0), 2)),
        ("chair", _place((0, 4), 6)),
    ],
    "ab-triangle": [
        ("ab-triangle", _place((2, 2), 5)),
        ("ab-triangle", _place((2 + 2 * _S2, 0), 4, mirror=True)),
        ("ab-triangle", _place((4 + _S2, _S2), 3)),
        ("ab-rhombus", _place((2, 0), 1)),
        ("ab-rhombus", _place((2 + _S2, _S2), 7)),
    ],
    "ab-rhombus": [
        ("ab-rhombus", _place((0, 0), 0)),
        ("ab-rhombus", _place((2 + 2 * _S2, 0), 2)),
        ("ab-rhombus", _place((2 + 2 * _S2, 2), 0)),
        ("ab-triangle", _place((2, 0), 0)),
        ("ab-triangle", _place((_S2, _S2), 1, mirror=True)),
        ("ab-triangle", _place((4 + 2 * _S2, 2), 5, mirror=True)),
        ("ab-triangle", _place((2 + 3 * _S2, 2 + _S2), 4)),
    ],
    "rp-triangle": [
        ("rp-triangle", _FIG_ORIGIN.compose(_tri_frame((12, 2), (12, 0), (8, 2)))),
        ("rp-triangle", _FIG_ORIGIN.compose(_tri_frame((10, 2), (8, 2), (10, 6)))),
        ("rp-triangle", _FIG_ORIGIN.compose(_tri_frame((12, 2), (10, 2), (12, 6)))),
        ("rp-triangle", _FIG_ORIGIN.compose(_tri_frame((10, 6), (12, 6), (10, 2)))),
        ("rp-triangle", _FIG_ORIGIN.compose(_tri_frame((12, 6), (10, 6), (12, 10)))),
    ],
    "pinwheel-triangle": [
        ("pinwheel-triangle", _FIG_ORIGIN.compose(_tri_frame((12, 2), (12, 0), (8, 2)))),
        ("pinwheel-triangle", _FIG_ORIGIN.compose(_tri_frame((10, 2), (8, 2), (10, 6)))),
        ("pinwheel-triangle", _FIG_ORIGIN.compose(_tri_frame((10, 2), (12, 2), (10, 6)))),
        ("pinwheel-triangle", _FIG_ORIGIN.compose(_tri_frame((12, 6), (10, 6), (12, 2)))),
        ("pinwheel-triangle", _FIG_ORIGIN.compose(_tri_frame((12, 6), (10, 6), (12, 10)))),
    ],
}


def _centroid_key(kind: str, t: Transform) -> Tuple[float, float]:
    pts = [t.apply(p).to_float() for p in PROTOTILES[kind].polygon]
    n = len(pts)
    cx = sum(p[0] for p in pts) / n
    cy = sum(p[1] for p in pts) / n
    return (round(cy, 9), round(cx, 9))


RULES: Dict[str, Tuple[Tuple[str, Transform], ...]] = {
    parent: tuple(sorted(children, key=lambda c: _centroid_key(*c)))
    for parent, children in _RAW_RULES.items()
}


def _deflate(parent: Transform, kind: str, placement: Transform) -> Transform:
    tiling = tiling_of(kind)
    if tiling == "chair":
        lin = Transform(parent.linear).scale_linear(Scalar(1, 0, 1))
        return Transform.translate(parent.translation).compose(lin.compose(placement))
    if tiling == "ab":
        lin = Transform(parent.linear).scale_linear(LAMBDA_INV)
        return Transform.translate(parent.translation).compose(lin.compose(placement))
    inner = Transform(parent.linear).compose(M_RP_ADJ).compose(placement)
    try:
        inner = inner.div_exact(5)
    except ArithmeticError:
        raise SubstitutionError(
            "triangle placement too small to subdivide exactly; use a scaled seed") from None
    return Transform.translate(parent.translation).compose(inner)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TileInstance:
    kind: str
    transform: Transform
    orientation: Optional[int]
    path: Tuple[int, ...]

    @functools.cached_property
    def polygon(self) -> Tuple[Vec2, ...]:
        return tuple(self.transform.apply(p) for p in PROTOTILES[self.kind].polygon)

    @property
    def tiling(self) -> str:
        return tiling_of(self.kind)

    @property
    def reflected(self) -> bool:
        return self.transform.is_reflection()

    def area2(self) -> Scalar:
        return polygon_area2(self.polygon)


def make_tile(kind: str, transform: Transform, path: Tuple[int, ...] = ()) -> TileInstance:
    code = None if tiling_of(kind) == "pinwheel" else _orientation(kind, transform)
    return TileInstance(kind, transform, code, tuple(path))


def substitute_once(tile: TileInstance) -> List[TileInstance]:
    """Children of ``tile`` in rule order; they exactly tile the parent region."""
    out = []
    for i, (ckind, placement) in enumerate(RULES[tile.kind]):
        t = _deflate(tile.transform, tile.kind, placement)
        out.append(make_tile(ckind, t, tile.path + (i,)))
    return out


class Ancestor(NamedTuple):
    tile: TileInstance
    kind: str
    orientation: Optional[int]
    child_index: Optional[int]
    subpath: Tuple[int, ...]


@dataclass(frozen=True)
class Patch:
    tiling: str
    level: int
    seed: TileInstance
    tiles: Tuple[TileInstance, ...]
    _hierarchy: Dict[Tuple[int, ...], TileInstance] = field(
        default_factory=dict, compare=False, repr=False, hash=False)

    def __len__(self) -> int:
        return len(self.tiles)

    def supertile(self, prefix: Sequence[int]) -> TileInstance:
        """The supertile whose hierarchy path is ``prefix``."""
        prefix = tuple(prefix)
        h = self._hierarchy
        if prefix in h:
            return h[prefix]
        if len(prefix) > self.level:
            raise SubstitutionError(f"path {prefix} deeper than level {self.level}")
        if not prefix:
            h[()] = self.seed
            return self.seed
        parent = self.supertile(prefix[:-1])
        kids = substitute_once(parent)
        for kid in kids:
            h[kid.path] = kid
        try:
            return h[prefix]
        except KeyError:
            raise SubstitutionError(f"no supertile at path {prefix}") from None

    def supertiles_at_level(self, k: int) -> List[TileInstance]:
        """All level-k supertiles, ordered by hierarchy path."""
        if not 0 <= k <= self.level:
            raise SubstitutionError(f"level {k} outside 0..{self.level}")
        prefixes = sorted({t.path[:self.level - k] for t in self.tiles})
        return [self.supertile(p) for p in prefixes]


def default_seed(tiling: str, level: int, kind: Optional[str] = None,
                 orientation: int = 0) -> TileInstance:
    """Seed placement keeping all level-``level`` coordinates exact.

    ``orientation`` rotates the seed by quarter turns (45 degree steps for ab).
    """
    if tiling not in TILINGS:
        raise SubstitutionError(f"unknown tiling {tiling!r}")
    kind = kind or KINDS_BY_TILING[tiling][0]
    if tiling_of(kind) != tiling:
        raise SubstitutionError(f"kind {kind!r} does not belong to {tiling!r}")
    if tiling == "chair":
        lin = Transform.scaling(2 ** level)
    elif tiling == "ab":
        s = ONE
        for _ in range(level):
            s = s * LAMBDA
        lin = Transform.scaling(s)
    elif tiling == "rp":
        if level % 2 == 0:
            lin = Transform.scaling(5 ** (level // 2))
        else:
            lin = Transform.scaling(5 ** ((level - 1) // 2)).compose(G_REFLECT).compose(M_RP)
    else:
        lin = Transform.scaling(5 ** level)
    steps = orientation if tiling == "ab" else 2 * orientation
    return make_tile(kind, Transform.rotation45(steps).compose(lin))


def generate_patch(tiling: str, level: int, seed: Optional[TileInstance] = None,
                   max_level: int = DEFAULT_MAX_LEVEL, seed_orientation: int = 0,
                   kind: Optional[str] = None) -> Patch:
    """Substitute the seed ``level`` times; deterministic tile order by path."""
    if level < 0:
        raise SubstitutionError("level must be nonnegative")
    if level > max_level:
        raise SubstitutionError(f"level {level} exceeds the configured maximum {max_level}")
    if seed is None:
        seed = default_seed(tiling, level, kind, seed_orientation)
    elif seed.tiling != tiling:
        raise SubstitutionError(f"seed kind {seed.kind!r} is not a {tiling} prototile")
    if seed.path:
        seed = TileInstance(seed.kind, seed.transform, seed.orientation, ())
    hierarchy: Dict[Tuple[int, ...], TileInstance] = {(): seed}
    layer = [seed]
    for _ in range(level):
        nxt = []
        for t in layer:
            kids = substitute_once(t)
            for kid in kids:
                hierarchy[kid.path] = kid
            nxt.extend(kids)
        layer = nxt
    return Patch(tiling, level, seed, tuple(layer), hierarchy)


def ancestor_at_level(patch: Patch, tile: TileInstance, k: int) -> Ancestor:
    """Level-k supertile containing ``tile`` with the next child index below it."""
    if not 0 <= k <= patch.level:
        raise SubstitutionError(f"level {k} outside 0..{patch.level}")
    depth = patch.level - k
    if len(tile.path) != patch.level:
        raise SubstitutionError("tile does not belong to this patch")
    anc = patch.supertile(tile.path[:depth])
    child = tile.path[depth] if k > 0 else None
    return Ancestor(anc, anc.kind, anc.orientation, child, tile.path[depth:])


# ---------------------------------------------------------------------------
# Orientation codes

def _sign(s: Scalar) -> int:
    return s.sign()


def _dir8(x: Scalar, y: Scalar) -> int:
    """Index k with (x, y) a positive multiple of (cos 45k, sin 45k)."""
    sx, sy = _sign(x), _sign(y)
    if sy == 0:
        return 0 if sx > 0 else 4
    if sx == 0:
        return 2 if sy > 0 else 6
    if x == y:
        return 1 if sx > 0 else 5
    if x == -y:
        return 3 if sx < 0 else 7
    raise SubstitutionError(f"direction ({x}, {y}) is not a multiple of 45 degrees")


def _quadrant(x: Scalar, y: Scalar) -> int:
    """Quarter-turn class of a direction: the r with angle in [90r - 45, 90r + 45)."""
    ax, ay = abs(x), abs(y)
    if ax == ay:
        raise SubstitutionError(f"direction ({x}, {y}) lies between quarter-turn classes")
    if ax > ay:
        return 0 if _sign(x) > 0 else 2
    return 1 if _sign(y) > 0 else 3


def _orientation(kind: str, t: Transform) -> Optional[int]:
    (a, _b), (c, _d) = t.linear
    refl = t.is_reflection()
    if kind == "chair":
        return _quadrant(a, c) + 1
    if kind == "ab-triangle":
        k = _dir8(a, c)
        return (4 + 2 * k) % 16 + 1 if not refl else (5 + 2 * k) % 16 + 1
    if kind == "ab-rhombus":
        k = _dir8(a, c)
        r = (k - 1) % 4 if refl else k % 4
        return (r + 2) % 4 + 1
    if kind == "rp-triangle":
        return _quadrant(a, c) + 1 + (4 if refl else 0)
    return None


def orientation_code(tile: TileInstance) -> int:
    """Orientation class of a chair, ab or rp tile (see module docs)."""
    if tile.tiling == "pinwheel":
        raise SubstitutionError("pinwheel tiles have no finite orientation code")
    code = _orientation(tile.kind, tile.transform)
    assert code is not None
    return code


def tile_count(tiling: str, level: int, kind: Optional[str] = None) -> int:
    """Closed-form tile count of a level-``level`` patch from a single seed."""
    if tiling == "chair":
        return 4 ** level
    if tiling in ("rp", "pinwheel"):
        return 5 ** level
    t, r = (1, 0) if (kind or "ab-triangle") == "ab-triangle" else (0, 1)
    for _ in range(level):
        t, r = 3 * t + 4 * r, 2 * t + 3 * r
    return t + r
