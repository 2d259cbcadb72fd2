"""Check every claimed chromatic value on finite patches.

Usage: python demos/certify_all.py

For each tiling the constructive colourings must be proper with exactly the
claimed number of colours, and a lower bound must meet that number: the
exact oracle for vertices and faces, the largest interior degree for edges.
Finite patches suffice because a colouring of the whole tiling needs at
least as many colours as any of its finite pieces.
"""
from tilecolour.cli import CLAIMS, certify

LEVELS = {"chair": 4, "ab": 4, "rp": 4, "pinwheel": 4}


def main() -> None:
    failures = 0
    for tiling, level in LEVELS.items():
        verdict = certify(tiling, level)
        claims = CLAIMS[tiling]
        print(f"{tiling:8s} L={level}  vertex {claims['vertex']}  edge {claims['edge']}  "
              f"face {claims['face']}  -> {'all checks pass' if verdict['passed'] else 'FAILED'}")
        for check in verdict["checks"]:
            if not check["passed"]:
                failures += 1
                print(f"    {check['name']}: claimed {check['claimed']}, computed {check['computed']}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
