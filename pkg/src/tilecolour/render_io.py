"""Canonical JSON serialization and deterministic SVG rendering.

Every document carries ``"v": "v1"`` and a ``"type"`` tag, is written with
sorted keys and no insignificant whitespace, and stores scalars as canonical
``{"a", "b", "k"}`` triples, so ``read(write(x)) == x`` holds exactly and
equal objects serialize to identical bytes.  Floating point appears only in
SVG output, formatted to six decimals.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Tuple, Union

from .colourers import Colouring, ColourTable, adjacent_pairs
from .exactgeom import Scalar, Transform, Vec2
from .planargraph import TilingGraph
from .substitution import Patch, TileInstance, orientation_code

SCHEMA = "v1"

Document = Union[Patch, TilingGraph, Colouring, ColourTable]


class ParseError(ValueError):
    """Malformed document; ``location`` is a JSON path such as ``$.tiles[3]``."""

    def __init__(self, location: str, message: str) -> None:
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


# ---------------------------------------------------------------------------
# Encoding

def _tile_json(t: TileInstance) -> dict:
    return {"kind": t.kind, "transform": t.transform.to_json(),
            "orientation": t.orientation, "path": list(t.path),
            "polygon": [p.to_json() for p in t.polygon]}


def _key_json(key) -> Any:
    if isinstance(key, tuple):
        return [_key_json(k) for k in key]
    return key


def to_json(obj: Document) -> dict:
    """The JSON-ready dictionary for a patch, graph, colouring or table."""
    if isinstance(obj, Patch):
        return {"v": SCHEMA, "type": "patch", "tiling": obj.tiling, "level": obj.level,
                "seed": _tile_json(obj.seed), "tiles": [_tile_json(t) for t in obj.tiles]}
    if isinstance(obj, TilingGraph):
        return {"v": SCHEMA, "type": "graph", "tiling": obj.tiling,
                "vertices": [p.to_json() for p in obj.vertices],
                "edges": [list(e) for e in obj.edges],
                "edge_direction": list(obj.edge_direction),
                "edge_length_class": list(obj.edge_length_class),
                "faces": [list(f) for f in obj.faces],
                "face_edges": [list(f) for f in obj.face_edges],
                "face_tiles": [list(f) for f in obj.face_tiles]}
    if isinstance(obj, Colouring):
        return {"v": SCHEMA, "type": "colouring", "target": obj.target, "palette": obj.palette,
                "assignment": [[i, c] for i, c in enumerate(obj.assignment)],
                "tables_used": [list(t) for t in obj.tables_used],
                "completed": list(obj.completed)}
    if isinstance(obj, ColourTable):
        return {"v": SCHEMA, "type": "table", "scheme": obj.scheme, "tiling": obj.tiling,
                "target": obj.target, "level": obj.level, "palette": obj.palette,
                "provenance": obj.provenance,
                "entries": [[_key_json(k), c] for k, c in obj.entries]}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Document) -> str:
    """Canonical text: sorted keys, compact separators, trailing newline."""
    return json.dumps(to_json(obj), sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True) + "\n"


def write(obj: Document, path: str) -> None:
    """Write atomically (temporary file in the same directory, then rename)."""
    atomic_write(path, dumps(obj))


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Decoding

class _Reader:
    """Walks a decoded JSON value, tracking the location for error messages."""

    def __init__(self, value: Any, location: str = "$") -> None:
        self.value = value
        self.location = location

    def fail(self, message: str) -> ParseError:
        return ParseError(self.location, message)

    def field(self, name: str) -> "_Reader":
        if not isinstance(self.value, dict):
            raise self.fail("expected an object")
        if name not in self.value:
            raise self.fail(f"missing field {name!r}")
        return _Reader(self.value[name], f"{self.location}.{name}")

    def items(self) -> List["_Reader"]:
        if not isinstance(self.value, list):
            raise self.fail("expected an array")
        return [_Reader(v, f"{self.location}[{i}]") for i, v in enumerate(self.value)]

    def int(self, allow_none: bool = False) -> Optional[int]:
        if allow_none and self.value is None:
            return None
        if type(self.value) is not int:
            raise self.fail("expected an integer")
        return self.value

    def str(self) -> str:
        if not isinstance(self.value, str):
            raise self.fail("expected a string")
        return self.value

    def ints(self) -> Tuple[int, ...]:
        return tuple(r.int() for r in self.items())  # type: ignore[misc]

    def convert(self, fn: Callable[[Any], Any]) -> Any:
        try:
            return fn(self.value)
        except ParseError:
            raise
        except (ValueError, TypeError, KeyError) as exc:
            raise self.fail(str(exc)) from None


def _read_scalar(obj: Any) -> Scalar:
    s = Scalar.from_json(obj)
    if s.triple != (int(obj["a"]), int(obj["b"]), obj["k"]):
        raise ValueError(f"non-canonical scalar {obj!r}")
    return s


def _read_vec(r: _Reader) -> Vec2:
    parts = r.items()
    if len(parts) != 2:
        raise r.fail("expected a point [x, y]")
    return Vec2(parts[0].convert(_read_scalar), parts[1].convert(_read_scalar))


def _read_transform(r: _Reader) -> Transform:
    rows = r.field("linear").items()
    if len(rows) != 2:
        raise r.fail("linear part must have two rows")
    lin = []
    for row in rows:
        entries = row.items()
        if len(entries) != 2:
            raise row.fail("row must have two entries")
        lin.append(tuple(e.convert(_read_scalar) for e in entries))
    return Transform(tuple(lin), _read_vec(r.field("translation")))


def _read_tile(r: _Reader) -> TileInstance:
    kind = r.field("kind").str()
    transform = _read_transform(r.field("transform"))
    orientation = r.field("orientation").int(allow_none=True)
    path = r.field("path").ints()
    tile = TileInstance(kind, transform, orientation, path)
    expected = r.convert(lambda _v: orientation_code(tile)) if orientation is not None else None
    if expected != orientation:
        raise r.fail(f"orientation {orientation} does not match the placement ({expected})")
    polygon = tuple(_read_vec(p) for p in r.field("polygon").items())
    if polygon != r.convert(lambda _v: tile.polygon):
        raise r.field("polygon").fail("polygon does not match the placement")
    return tile


def _read_key(r: _Reader) -> Any:
    if isinstance(r.value, list):
        return tuple(_read_key(x) for x in r.items())
    if r.value is None or isinstance(r.value, (str, int)) and not isinstance(r.value, bool):
        return r.value
    raise r.fail("table keys contain only arrays, strings, integers and null")


def from_json(obj: Any) -> Document:
    """Inverse of :func:`to_json`; raises :class:`ParseError` with a location."""
    root = _Reader(obj)
    if root.field("v").str() != SCHEMA:
        raise root.field("v").fail(f"unsupported schema version, expected {SCHEMA!r}")
    kind = root.field("type").str()
    if kind == "patch":
        tiles = tuple(_read_tile(t) for t in root.field("tiles").items())
        return Patch(root.field("tiling").str(), root.field("level").int(),
                     _read_tile(root.field("seed")), tiles)
    if kind == "graph":
        return TilingGraph(
            root.field("tiling").str(),
            tuple(_read_vec(p) for p in root.field("vertices").items()),
            tuple(e.ints() for e in root.field("edges").items()),  # type: ignore[misc]
            tuple(d.int(allow_none=True) for d in root.field("edge_direction").items()),
            tuple(s.str() for s in root.field("edge_length_class").items()),
            tuple(f.ints() for f in root.field("faces").items()),
            tuple(f.ints() for f in root.field("face_edges").items()),
            tuple(f.ints() for f in root.field("face_tiles").items()))
    if kind == "colouring":
        pairs = root.field("assignment").items()
        assignment: List[Optional[int]] = []
        for i, p in enumerate(pairs):
            idx, colour = p.items() if len(p.items()) == 2 else (None, None)
            if idx is None or idx.int() != i:
                raise p.fail(f"expected [{i}, colour]")
            assignment.append(colour.int(allow_none=True))
        tables = tuple(tuple(x.str() for x in t.items()) for t in root.field("tables_used").items())
        completed = root.field("completed").ints() if "completed" in obj else ()
        return root.convert(lambda _v: Colouring(
            root.field("target").str(), tuple(assignment), root.field("palette").int(),
            tables, completed))  # type: ignore[arg-type]
    if kind == "table":
        entries = []
        for e in root.field("entries").items():
            parts = e.items()
            if len(parts) != 2:
                raise e.fail("expected [key, colour]")
            entries.append((_read_key(parts[0]), parts[1].int()))
        return root.convert(lambda _v: ColourTable(
            root.field("scheme").str(), root.field("tiling").str(), root.field("target").str(),
            root.field("level").int(), root.field("palette").int(), tuple(entries),
            root.field("provenance").str()))
    raise root.field("type").fail(f"unknown document type {kind!r}")


def loads(text: str) -> Document:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return from_json(obj)


def read(path: str) -> Document:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write_read_roundtrip(obj: Document) -> Document:
    """Serialize and parse back; equal to ``obj`` for every valid object."""
    return loads(dumps(obj))


# ---------------------------------------------------------------------------
# SVG

DEFAULT_PALETTE: Tuple[str, ...] = (
    "#d62728",  # red
    "#1f77b4",  # blue
    "#2ca02c",  # green
    "#ff7f0e",  # orange
    "#9467bd",  # purple
    "#17becf",  # cyan
    "#8c564b",  # brown
    "#e377c2",  # pink
)


@dataclass(frozen=True)
class RenderSpec:
    """Drawing options; coordinates are multiplied by ``scale`` (y points up)."""

    palette: Tuple[str, ...] = DEFAULT_PALETTE
    scale: float = 10.0
    margin: float = 10.0
    stroke: str = "#000000"
    stroke_width: float = 0.6
    edge_width: float = 2.0
    vertex_radius: float = 2.5
    highlight_conflicts: bool = True
    conflict_colour: str = "#000000"
    viewport: Optional[Tuple[float, float, float, float]] = None   # xmin, ymin, xmax, ymax


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def render_svg(patch: Patch, g: TilingGraph, colouring: Optional[Colouring] = None,
               spec: RenderSpec = RenderSpec()) -> str:
    """SVG document for a patch, optionally coloured (byte-stable).

    Face colourings fill tiles, edge colourings stroke edges and vertex
    colourings draw discs.  With ``highlight_conflicts`` every monochromatic
    adjacent pair is outlined (faces, vertices) or dashed (edges).
    """
    if colouring is not None and colouring.palette > len(spec.palette):
        raise ValueError(f"palette of {len(spec.palette)} colours cannot draw {colouring.palette}")
    pts = [p.to_float() for p in g.vertices]
    if spec.viewport is not None:
        xmin, ymin, xmax, ymax = spec.viewport
    elif pts:
        xs, ys = [p[0] for p in pts], [p[1] for p in pts]
        xmin, ymin, xmax, ymax = min(xs), min(ys), max(xs), max(ys)
    else:
        xmin = ymin = xmax = ymax = 0.0
    s, m = spec.scale, spec.margin
    width, height = (xmax - xmin) * s + 2 * m, (ymax - ymin) * s + 2 * m

    def xy(v: int) -> str:
        x, y = pts[v]
        return f"{_fmt((x - xmin) * s + m)},{_fmt((ymax - y) * s + m)}"

    target = colouring.target if colouring is not None else None
    colour = (lambda i: spec.palette[colouring.assignment[i]]  # type: ignore[union-attr]
              if colouring.assignment[i] is not None else "#ffffff")  # type: ignore[union-attr]
    bad: set = set()
    if colouring is not None and spec.highlight_conflicts:
        a = colouring.assignment
        for u, v in adjacent_pairs(g, colouring.target):
            if a[u] is not None and a[u] == a[v]:
                bad.update((u, v))

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
           f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
           f'<g stroke="{spec.stroke}" stroke-width="{_fmt(spec.stroke_width)}" '
           'stroke-linejoin="round">']
    for f, cyc in enumerate(g.faces):
        fill = colour(f) if target == "face" else "none"
        extra = (f' stroke="{spec.conflict_colour}" stroke-width="{_fmt(3 * spec.stroke_width)}"'
                 if target == "face" and f in bad else "")
        out.append(f'<polygon points="{" ".join(xy(v) for v in cyc)}" fill="{fill}"{extra}/>')
    out.append("</g>")
    if target == "edge":
        out.append(f'<g stroke-width="{_fmt(spec.edge_width)}" stroke-linecap="round">')
        for e, (u, v) in enumerate(g.edges):
            (x1, y1), (x2, y2) = xy(u).split(","), xy(v).split(",")
            dash = ' stroke-dasharray="2,2"' if e in bad else ""
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colour(e)}"{dash}/>')
        out.append("</g>")
    elif target == "vertex":
        out.append(f'<g stroke="{spec.stroke}" stroke-width="{_fmt(spec.stroke_width)}">')
        for v in range(g.n_vertices):
            cx, cy = xy(v).split(",")
            r = spec.vertex_radius * (1.6 if v in bad else 1.0)
            out.append(f'<circle cx="{cx}" cy="{cy}" r="{_fmt(r)}" fill="{colour(v)}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path: str, patch: Patch, g: TilingGraph, colouring: Optional[Colouring] = None,
              spec: RenderSpec = RenderSpec()) -> None:
    atomic_write(path, render_svg(patch, g, colouring, spec))
