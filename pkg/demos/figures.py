"""Draw one coloured patch per tiling and target as SVG files.

Usage: python demos/figures.py [OUTPUT_DIR]

Each drawing uses the constructive colouring for its tiling, so the chair
faces come out in three colours, the ab faces in two, and so on.
"""
import os
import sys

from tilecolour.colourers import paper_colouring, verify_colouring
from tilecolour.planargraph import build_graph
from tilecolour.render_io import write_svg
from tilecolour.substitution import generate_patch

LEVELS = {"chair": 4, "ab": 3, "rp": 4, "pinwheel": 3}


def main(out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for tiling, level in LEVELS.items():
        patch = generate_patch(tiling, level)
        g = build_graph(patch)
        print(f"{tiling} level {level}: {len(patch)} tiles, {g.n_vertices} vertices, {g.n_edges} edges")
        for target in ("vertex", "edge", "face"):
            c = paper_colouring(patch, target, g)
            ok = verify_colouring(g, c).proper
            path = os.path.join(out_dir, f"{tiling}-{target}.svg")
            write_svg(path, patch, g, c)
            print(f"  {target:6s} {c.palette} colours, {'proper' if ok else 'IMPROPER'} -> {path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
