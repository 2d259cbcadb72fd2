import itertools
import random

import pytest

from tilecolour import oracle
from tilecolour.colourers import ChairFaceScheme, hierarchical_face_colour
from tilecolour.oracle import (
    ColourProblem, NoTableError, OracleLimitError, bipartite_or_witness, certificate,
    derive_colour_table, exact_chromatic, is_cycle, k_colour, line_graph, problem_from_graph,
    solve_table)
from helpers import enumerate_colourable, graph, patch


def cycle(n):
    return ColourProblem.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def test_triangle_vertex():
    chi, w = exact_chromatic(ColourProblem.from_edges(3, [(0, 1), (1, 2), (0, 2)]))
    assert chi == 3 and sorted(w) == [0, 1, 2]


def test_c5_edges():
    p = line_graph(5, [(i, (i + 1) % 5) for i in range(5)])
    assert p.mode == "edge" and exact_chromatic(p)[0] == 3


def test_chair_level3_faces_need_three():
    problem = problem_from_graph(graph("chair", 3), "face")
    chi, witness = exact_chromatic(problem)
    assert chi == 3
    assert k_colour(problem, 2) is None
    assert all(witness[a] != witness[b] for a, b in problem.edges())
    hier = hierarchical_face_colour(patch("chair", 3))
    assert all(hier.assignment[a] != hier.assignment[b] for a, b in problem.edges())


def test_bipartite_witnesses():
    colours, odd = bipartite_or_witness(problem_from_graph(graph("ab", 2), "vertex"))
    assert colours is None and len(odd) % 2 == 1
    assert is_cycle(problem_from_graph(graph("ab", 2), "vertex"), odd)
    colours, odd = bipartite_or_witness(problem_from_graph(graph("chair", 3), "vertex"))
    assert odd is None and colours is not None
    colours, odd = bipartite_or_witness(cycle(8))
    assert odd is None and colours == [0, 1, 0, 1, 0, 1, 0, 1]


def test_agrees_with_full_enumeration_on_random_graphs():
    rng = random.Random(20260116)
    for _ in range(100):
        n = rng.randint(1, 12)
        density = rng.choice([0.2, 0.35, 0.5])
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density]
        problem = ColourProblem.from_edges(n, edges)
        chi, witness = exact_chromatic(problem)
        assert all(witness[u] != witness[v] for u, v in edges)
        assert len(set(witness)) == chi
        truth = next((k for k in range(1, 5) if enumerate_colourable(n, edges, k)), None)
        if truth is None:
            assert chi >= 5
        else:
            assert chi == truth


def test_limit_is_refused():
    with pytest.raises(OracleLimitError):
        exact_chromatic(cycle(30), limit=10)


def test_deterministic_witness():
    problem = problem_from_graph(graph("rp", 3), "vertex")
    assert exact_chromatic(problem) == exact_chromatic(problem)


def test_certificate_fields():
    problem = cycle(5)
    chi, w = exact_chromatic(problem)
    _, odd = bipartite_or_witness(problem)
    cert = certificate(problem, chi, w, odd, tiling="test")
    assert cert["chi"] == 3 and cert["mode"] == "vertex" and cert["tiling"] == "test"
    assert cert["problem_digest"] == cycle(5).digest() != cycle(7).digest()
    assert sorted(cert["odd_cycle"]) == list(range(5))


def test_derive_chair_table():
    table = derive_colour_table(ChairFaceScheme(use_figure=False), patch("chair", 3), patch("chair", 5))
    assert len(table) == 16 and table.palette == 3


def test_impossible_table_is_reported():
    class TwoColourChair(ChairFaceScheme):
        palette = 2

    with pytest.raises(NoTableError):
        derive_colour_table(TwoColourChair(use_figure=False), patch("chair", 3))


def test_verification_catches_missing_keys():
    # a level-1 training patch only shows one supertile orientation
    with pytest.raises(NoTableError, match="absent from training"):
        derive_colour_table(ChairFaceScheme(use_figure=False), patch("chair", 1), patch("chair", 3))


def test_solve_table_is_lexicographically_smallest():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 7)
        palette = rng.choice([2, 3])
        keys = [f"k{i}" for i in range(n)]
        conflicts = {(keys[a], keys[b]) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.4}
        banned = {k: {c for c in range(palette) if rng.random() < 0.2} for k in keys}
        expected = None
        for assign in itertools.product(range(palette), repeat=n):
            if all(assign[keys.index(a)] != assign[keys.index(b)] for a, b in conflicts) and \
                    all(assign[i] not in banned[keys[i]] for i in range(n)):
                expected = dict(zip(keys, assign))
                break
        if expected is None:
            with pytest.raises(NoTableError):
                solve_table(keys, conflicts, banned, palette, keys)
        else:
            assert solve_table(keys, conflicts, banned, palette, keys) == expected


def test_loops_rejected():
    with pytest.raises(ValueError):
        ColourProblem.from_edges(2, [(1, 1)])
    assert exact_chromatic(ColourProblem.from_edges(0, []))[0] == 0
    assert exact_chromatic(ColourProblem.from_edges(3, []))[0] == 1
    assert oracle.find_triangle(cycle(5)) is None
