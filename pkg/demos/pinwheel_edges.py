"""Walk through the 8-colouring of pinwheel edges.

Usage: python demos/pinwheel_edges.py

Pinwheel edges point in infinitely many directions, so colouring them one
direction at a time is impossible.  Instead the edges are split by the tile
side they lie on (legs or hypotenuse).  Inside each part, two edges meeting
at a vertex either make a "turn" or not, and counting turns mod 2 splits the
part into two cosets.  Every vertex meets at most two edges of one coset
and cosets have no cycles, so each coset is a union of paths that take two
alternating colours.  That gives 2 parts x 2 cosets x 2 colours = 8.
"""
from tilecolour.colourers import pinwheel_coset_edge_colour, verify_colouring
from tilecolour.planargraph import build_graph, degree_stats, pinwheel_doubled_supertile
from tilecolour.substitution import generate_patch


def main() -> None:
    for level in (2, 3, 4):
        g = build_graph(generate_patch("pinwheel", level))
        c, reports = pinwheel_coset_edge_colour(g, with_report=True)
        print(f"level {level}: {g.n_edges} edges, proper: {verify_colouring(g, c).proper}")
        for r in reports:
            print(f"  {r.subgraph:7s} components {r.components}, cosets per component "
                  f"{sorted(set(r.cosets_per_component))}, max coset degree {r.max_coset_degree}, "
                  f"{r.paths} paths")
        print(f"  largest interior degree (margin 2): {degree_stats(g, 2).delta_interior}")

    w = pinwheel_doubled_supertile()
    p = w.graph.vertices[w.vertex]
    print(f"two level-1 supertiles forming an isosceles triangle: vertex {p} has degree {w.degree},")
    print("so at least 8 colours are needed and the coset colouring is optimal.")


if __name__ == "__main__":
    main()
