"""Show where the colour tables behind the hierarchical schemes come from.

Usage: python demos/colour_tables.py

Several colourings are given as pictures of coloured supertiles.  The chair
and rp face tables and the rp vertex table are transcribed from those
pictures ("paper-given").  The rest are found by an exact search for the
lexicographically smallest table that is proper on a training patch, then
re-checked on larger patches ("derived").  Where a picture exists for only
some keys (the pinwheel rectangles), the picture is fixed first and the
search fills in the remainder.
"""
from collections import Counter

from tilecolour.colourers import COLOUR_NAMES, SCHEMES, hierarchical_face_colour, hypotenuse_runs, standard_table
from tilecolour.planargraph import build_graph
from tilecolour.substitution import generate_patch


def describe(level, kind) -> str:
    return f"L={level}" + (f" ({kind} seed)" if kind else "")


def main() -> None:
    for (tiling, target), spec in SCHEMES.items():
        table = standard_table(tiling, target)
        train = ", ".join(describe(L, k) for L, k in spec.training)
        check = ", ".join(describe(L, k) for L, k in spec.verification)
        print(f"{table.scheme:15s} {len(table):4d} entries  {table.provenance:11s} "
              f"trained on {train}; verified on {check}")

    patch = generate_patch("rp", 4)
    runs = hypotenuse_runs(patch, build_graph(patch), hierarchical_face_colour(patch))
    print("\nrp faces along level-1 hypotenuses on rectangle sides, walked clockwise:")
    for (kind, colours), n in sorted(Counter(runs).items()):
        print(f"  type {kind:2s} {'-'.join(COLOUR_NAMES[c] for c in colours):16s} x{n}")


if __name__ == "__main__":
    main()
