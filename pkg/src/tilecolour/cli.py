"""Command line: generate, color, verify, oracle, render and certify.

Exit status: 0 success, 1 improper colouring or failed claim, 2 usage or
input error, 3 oracle size limit refused.  Options can also come from a
``key = value`` config file (``--config``); flags given on the command line
override it.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from typing import Dict, List, Optional, Sequence

from . import oracle, render_io
from .colourers import (ColouringError, Colouring, TARGETS, paper_colouring, verify_colouring)
from .planargraph import TilingGraph, build_graph, degree_stats, pinwheel_doubled_supertile
from .substitution import DEFAULT_MAX_LEVEL, TILINGS, Patch, SubstitutionError, generate_patch

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

# Claimed (vertex, edge, face) chromatic values per tiling.
CLAIMS: Dict[str, Dict[str, int]] = {
    "chair": {"vertex": 2, "edge": 4, "face": 3},
    "ab": {"vertex": 3, "edge": 8, "face": 2},
    "rp": {"vertex": 3, "edge": 8, "face": 3},
    "pinwheel": {"vertex": 3, "edge": 8, "face": 3},
}


class UsageError(Exception):
    pass


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        render_io.atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _load_patch(args) -> Patch:
    if getattr(args, "input", None):
        obj = render_io.read(args.input)
        if not isinstance(obj, Patch):
            raise UsageError(f"{args.input} holds a {type(obj).__name__}, not a patch")
        if args.tiling and args.tiling != obj.tiling:
            raise UsageError(f"--tiling {args.tiling} does not match the {obj.tiling} patch")
        return obj
    if not args.tiling or args.level is None:
        raise UsageError("give --in PATCH or both --tiling and --level")
    return generate_patch(args.tiling, args.level, max_level=args.max_level,
                          seed_orientation=args.seed_orientation)


def _load_colouring(path: str) -> Colouring:
    obj = render_io.read(path)
    if not isinstance(obj, Colouring):
        raise UsageError(f"{path} holds a {type(obj).__name__}, not a colouring")
    return obj


def oracle_colouring(g: TilingGraph, mode: str, limit: int) -> Colouring:
    chi, witness = oracle.exact_chromatic(oracle.problem_from_graph(g, mode), limit)
    return Colouring(mode, tuple(witness), max(chi, 1))


# ---------------------------------------------------------------------------
# Subcommands

def cmd_generate(args) -> int:
    patch = _load_patch(args)
    _emit(render_io.dumps(patch), args.out)
    if args.graph_out:
        render_io.write(build_graph(patch), args.graph_out)
    print(f"{patch.tiling} level {patch.level}: {len(patch)} tiles", file=sys.stderr)
    return EXIT_OK


def cmd_color(args) -> int:
    patch = _load_patch(args)
    g = build_graph(patch)
    if args.algorithm == "paper":
        c = paper_colouring(patch, args.mode, g)
    else:
        c = oracle_colouring(g, args.mode, args.limit)
    report = verify_colouring(g, c)
    _emit(render_io.dumps(c), args.out)
    if args.svg:
        render_io.write_svg(args.svg, patch, g, c)
    print(f"{args.mode} colouring, palette {c.palette}, "
          f"{'proper' if report.proper else f'{len(report.conflicts)} conflicts'}", file=sys.stderr)
    return EXIT_OK if report.proper else EXIT_FAIL


def cmd_verify(args) -> int:
    patch = _load_patch(args)
    g = build_graph(patch)
    c = _load_colouring(args.colouring)
    report = verify_colouring(g, c)
    out = {"v": render_io.SCHEMA, "target": c.target, "elements": report.elements,
           "palette": c.palette, "proper": report.proper,
           "conflicts": [list(p) for p in report.conflicts]}
    _emit(json.dumps(out, sort_keys=True) + "\n", args.out)
    return EXIT_OK if report.proper else EXIT_FAIL


def cmd_oracle(args) -> int:
    patch = _load_patch(args)
    g = build_graph(patch)
    problem = oracle.problem_from_graph(g, args.mode)
    chi, witness = oracle.exact_chromatic(problem, args.limit)
    _, cycle = oracle.bipartite_or_witness(problem)
    cert = oracle.certificate(problem, chi, witness, cycle, tiling=patch.tiling, level=patch.level)
    _emit(json.dumps(cert, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    patch = _load_patch(args)
    g = build_graph(patch)
    c = _load_colouring(args.colouring) if args.colouring else None
    if not args.svg:
        raise UsageError("render needs --svg PATH")
    render_io.write_svg(args.svg, patch, g, c)
    return EXIT_OK


def certify(tiling: str, level: int, margin: int = 2, limit: int = oracle.DEFAULT_LIMIT,
            seed_orientation: int = 0) -> dict:
    """Claimed values against computed ones on one patch, as a verdict document.

    For each target the constructive colouring must be proper with exactly
    the claimed palette, and a lower bound must match it: the oracle's exact
    value for vertices and faces, the interior maximum degree for edges.
    """
    patch = generate_patch(tiling, level, seed_orientation=seed_orientation)
    g = build_graph(patch)
    checks: List[dict] = []

    def check(name: str, claimed, computed, **extra) -> None:
        checks.append(dict(name=name, claimed=claimed, computed=computed,
                           passed=claimed == computed, **extra))

    for target in TARGETS:
        claim = CLAIMS[tiling][target]
        c = paper_colouring(patch, target, g)
        report = verify_colouring(g, c)
        check(f"{target}: constructive colouring proper", True, report.proper,
              conflicts=len(report.conflicts))
        check(f"{target}: constructive palette", claim, c.palette, colours_used=c.colours_used())
        if target == "edge":
            stats = degree_stats(g, margin)
            check("edge: interior maximum degree (lower bound)", claim, stats.delta_interior,
                  margin=margin)
        else:
            problem = oracle.problem_from_graph(g, target)
            chi, _ = oracle.exact_chromatic(problem, limit)
            _, cycle = oracle.bipartite_or_witness(problem)
            check(f"{target}: oracle chromatic number", claim, chi,
                  odd_cycle_length=len(cycle) if cycle else None)
    if tiling == "pinwheel":
        w = pinwheel_doubled_supertile()
        check("edge: degree of the doubled-supertile vertex", 8, w.degree)
    return {"v": render_io.SCHEMA, "tiling": tiling, "level": level, "claims": CLAIMS[tiling],
            "checks": checks, "passed": all(ch["passed"] for ch in checks)}


def cmd_certify(args) -> int:
    if not args.tiling or args.level is None:
        raise UsageError("certify needs --tiling and --level")
    verdict = certify(args.tiling, args.level, args.margin, args.limit, args.seed_orientation)
    _emit(json.dumps(verdict, sort_keys=True, indent=1) + "\n", args.out)
    for ch in verdict["checks"]:
        print(f"{'PASS' if ch['passed'] else 'FAIL'}  {ch['name']}: "
              f"claimed {ch['claimed']}, computed {ch['computed']}", file=sys.stderr)
    return EXIT_OK if verdict["passed"] else EXIT_FAIL


COMMANDS = {"generate": cmd_generate, "color": cmd_color, "verify": cmd_verify,
            "oracle": cmd_oracle, "render": cmd_render, "certify": cmd_certify}


# ---------------------------------------------------------------------------
# Argument parsing

def read_config(path: str) -> Dict[str, str]:
    """``key = value`` lines (``#`` comments); keys use flag names without dashes."""
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    with open(path, encoding="utf-8") as fh:
        parser.read_string("[run]\n" + fh.read(), source=path)
    aliases = {"in": "input"}
    return {aliases.get(k, k.replace("-", "_")): v for k, v in parser["run"].items()}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tilecolour", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--tiling", choices=TILINGS)
        p.add_argument("--level", type=int)
        p.add_argument("--seed-orientation", type=int, default=0)
        p.add_argument("--max-level", type=int, default=DEFAULT_MAX_LEVEL)
        p.add_argument("--in", dest="input", help="patch file instead of --tiling/--level")
        p.add_argument("--out", help="output file (default: standard output)")
        p.add_argument("--limit", type=int, default=oracle.DEFAULT_LIMIT)
        if name in ("color", "oracle"):
            p.add_argument("--mode", choices=TARGETS, required=True)
        if name == "color":
            p.add_argument("--algorithm", choices=("paper", "oracle"), default="paper")
        if name in ("color", "render"):
            p.add_argument("--svg")
        if name in ("verify", "render"):
            p.add_argument("--colouring", "--coloring", required=(name == "verify"))
        if name == "generate":
            p.add_argument("--graph-out")
        if name == "certify":
            p.add_argument("--margin", type=int, default=2)
    return parser


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            config = read_config(args.config)
        except (OSError, configparser.Error) as exc:
            parser.error(f"cannot read config {args.config}: {exc}")
        sub = parser._subparsers._group_actions[0].choices[args.command]  # type: ignore[union-attr]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(config) - known)
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        sub.set_defaults(**config)
        args = parser.parse_args(argv)
    return args


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit status."""
    try:
        args = parse_args(list(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.level is not None and args.level > args.max_level:
            raise UsageError(f"level {args.level} exceeds --max-level {args.max_level}")
        return COMMANDS[args.command](args)
    except oracle.OracleLimitError as exc:
        print(f"oracle refused: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (UsageError, render_io.ParseError, SubstitutionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ColouringError as exc:
        print(f"colouring failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run_command())
