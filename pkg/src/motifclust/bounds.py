"""Upper bounds on clique cover numbers and a randomized edge-triangle cover."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from math import ceil, e, log

import numpy as np

from .graph import Graph, enumerate_triangles


def ecc_bound(n: int) -> int:
    """``floor(n^2 / 4)``: no graph on n vertices needs more cliques to cover its edges."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * n // 4


def etcc_bound(n: int) -> int:
    """Cliques always sufficient to cover all edges and triangles of an n-vertex graph.

    Stated for n >= 7; smaller n still gets a value but also a warning.
    Attained exactly by the complete balanced tripartite graph.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n < 7:
        warnings.warn(f"etcc_bound: n={n} is outside the proven range n >= 7", stacklevel=2)
    r = n % 3
    if r == 0:
        return n**3 // 27
    if r == 1:
        return (n - 1) ** 3 // 27 + (n - 1) ** 2 // 9
    return (n + 1) ** 3 // 27 - (n + 1) ** 2 // 9


def alon_bound(n: int, d: int) -> int:
    """``ceil(3 e^3 (d+1)^3 ln n)`` for graphs whose minimum degree is at least ``n - d``."""
    if d < 1 or n < 1:
        raise ValueError("need n >= 1 and d >= 1")
    return ceil(3 * e**3 * (d + 1) ** 3 * log(n))


@dataclass(frozen=True)
class CoverReport:
    cliques: list[list[int]]
    covered_all: bool
    size: int
    bound_used: int
    uncovered: int = 0
    trials_used: int = 0


def uncovered_count(g: Graph, cliques) -> int:
    """Edges plus triangles not contained in any of ``cliques``."""
    covered: set[tuple[int, ...]] = set()
    for c in cliques:
        members = sorted(c)
        covered.update(combinations(members, 2))
        covered.update(combinations(members, 3))
    missing = sum(1 for e_ in g.edges() if e_ not in covered)
    missing += sum(1 for t in enumerate_triangles(g) if t not in covered)
    return missing


def random_cover(g: Graph, d: int, seed: int | None = 0, trials: int = 5) -> CoverReport:
    """Sample ``alon_bound(n, d)`` vertex sets per trial and prune each to a clique.

    Every vertex enters a sample with probability ``1/(d+1)``; vertices with
    a non-neighbour inside the sample are then removed. A trial succeeds
    when the pruned sets cover every edge and triangle. Distinct non-empty
    cliques of the successful (or last) trial are reported.
    """
    n = g.n
    if trials < 1:
        raise ValueError("trials must be >= 1")
    min_deg = int(g.adj.sum(1).min())
    if min_deg < n - d:
        warnings.warn(f"minimum degree {min_deg} is below n - d = {n - d}; no coverage guarantee", stacklevel=2)
    m = alon_bound(n, d)
    non_adj = ~g.adj & ~np.eye(n, dtype=bool)
    seeds = np.random.SeedSequence(seed).spawn(trials)
    report = None
    for t, ss in enumerate(seeds, start=1):
        rng = np.random.default_rng(ss)
        picks = rng.random((m, n)) < 1.0 / (d + 1)
        # a picked vertex survives if none of its non-neighbours were picked
        clash = (picks.astype(np.int64) @ non_adj.astype(np.int64)) > 0
        pruned = picks & ~clash
        cliques = sorted({tuple(np.flatnonzero(row).tolist()) for row in pruned if row.any()})
        missing = uncovered_count(g, cliques)
        report = CoverReport([list(c) for c in cliques], missing == 0, len(cliques), m, missing, t)
        if missing == 0:
            break
    return report
