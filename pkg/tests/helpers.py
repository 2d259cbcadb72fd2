"""Cached patches and graphs shared across test modules."""
from __future__ import annotations

import functools
from typing import Optional

from tilecolour.planargraph import TilingGraph, build_graph
from tilecolour.substitution import Patch, generate_patch


@functools.lru_cache(maxsize=None)
def patch(tiling: str, level: int, kind: Optional[str] = None) -> Patch:
    return generate_patch(tiling, level, kind=kind)


@functools.lru_cache(maxsize=None)
def graph(tiling: str, level: int, kind: Optional[str] = None) -> TilingGraph:
    return build_graph(patch(tiling, level, kind))


def enumerate_colourable(n: int, edges, k: int) -> bool:
    """Decide k-colourability by checking all k**n assignments (vectorised)."""
    import itertools

    import numpy as np

    if n == 0:
        return True
    head = min(n, 4)
    tail = n - head
    combos = list(itertools.product(range(k), repeat=tail))
    rest = np.array(combos, dtype=np.int8).reshape(len(combos), tail)
    for prefix in itertools.product(range(k), repeat=head):
        cols = np.empty((len(rest), n), dtype=np.int8)
        cols[:, :head] = prefix
        cols[:, head:] = rest
        ok = np.ones(len(rest), dtype=bool)
        for u, v in edges:
            ok &= cols[:, u] != cols[:, v]
        if ok.any():
            return True
    return False
