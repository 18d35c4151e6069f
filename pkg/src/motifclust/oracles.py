"""Exhaustive ground truth for small instances.

Nothing here calls the LP, rounding or annealing code; the only shared
pieces are the data types and (for covers) clique enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import ceil, comb
from typing import Any, Iterator

import numpy as np

from .errors import ResourceGuardError
from .graph import Graph, enumerate_triangles, maximal_cliques
from .instance import WeightedInstance

MAX_MMCC_N = 12
MAX_ASSIGNMENT_STATES = 10**7
DEFAULT_COVER_BUDGET = 2_000_000


@dataclass(frozen=True)
class ExactResult:
    optimum: Any
    witness: Any


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """Every set partition of ``0..n-1`` exactly once, as a label string.

    ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``.
    """
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(a)
            return
        for lab in range(top + 2):
            a[i] = lab
            yield from rec(i + 1, max(top, lab))

    yield from rec(1, 0)


def exact_mmcc(inst: WeightedInstance) -> ExactResult:
    """Minimum clustering cost over all set partitions (depth-first, pruned).

    Vertex ``k`` is labelled after ``0..k-1``, so the cost of every pair
    and triple whose largest member is ``k`` is settled at that step; costs
    are non-negative, so a partial cost at or above the incumbent prunes.
    """
    n = inst.n
    if n > MAX_MMCC_N:
        raise ResourceGuardError(f"exact_mmcc refuses n={n} > {MAX_MMCC_N}")
    wp = inst.w_pair.tolist()
    wt = inst.w_triple.tolist()
    l1, l2 = inst.lambda1, inst.lambda2
    best = [float("inf"), None]
    lab = [0] * n

    def step_cost(k: int) -> float:
        c = 0.0
        lk = lab[k]
        for i in range(k):
            w = wp[i][k]
            c += l1 * ((1.0 - w) if lab[i] == lk else w)
            for j in range(i + 1, k):
                w3 = wt[i][j][k]
                together = lab[i] == lk and lab[j] == lk
                c += l2 * ((1.0 - w3) if together else w3)
        return c

    def rec(k: int, top: int, acc: float) -> None:
        if acc >= best[0]:
            return
        if k == n:
            best[0], best[1] = acc, list(lab)
            return
        for c in range(top + 2):
            lab[k] = c
            rec(k + 1, max(top, c), acc + step_cost(k))

    if n == 0:
        return ExactResult(0.0, [])
    lab[0] = 0
    rec(1, 0, 0.0)
    return ExactResult(best[0], np.array(best[1]))


def _cover_universe(g: Graph, with_triangles: bool):
    elems: list[tuple[int, ...]] = list(g.edges())
    if with_triangles:
        elems += enumerate_triangles(g)
    return elems


def exact_set_cover(universe_size: int, sets: list[frozenset[int]], budget: int = DEFAULT_COVER_BUDGET):
    """Minimum number of ``sets`` covering ``0..universe_size-1``.

    Branches on the uncovered element contained in the fewest sets; prunes
    with ``ceil(uncovered / largest remaining gain)``. Returns the indices
    of an optimal cover.
    """
    containing = [[] for _ in range(universe_size)]
    for s_idx, s in enumerate(sets):
        for e in s:
            containing[e].append(s_idx)
    if any(not c for c in containing):
        raise ValueError("some element lies in no set")

    full = frozenset(range(universe_size))
    best = _greedy_cover(full, sets)
    nodes = 0

    def rec(uncovered: frozenset[int], chosen: list[int]) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise ResourceGuardError(f"set-cover search exceeded its budget of {budget} nodes")
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        gain = max(len(s & uncovered) for s in sets)
        if len(chosen) + ceil(len(uncovered) / gain) >= len(best):
            return
        pivot = min(uncovered, key=lambda e: (len(containing[e]), e))
        for s_idx in sorted(containing[pivot], key=lambda i: -len(sets[i] & uncovered)):
            chosen.append(s_idx)
            rec(uncovered - sets[s_idx], chosen)
            chosen.pop()

    rec(full, [])
    return sorted(best)


def _greedy_cover(full: frozenset[int], sets: list[frozenset[int]]) -> list[int]:
    uncovered, chosen = set(full), []
    while uncovered:
        i = max(range(len(sets)), key=lambda k: (len(sets[k] & uncovered), -k))
        chosen.append(i)
        uncovered -= sets[i]
    return chosen


def _exact_clique_cover(g: Graph, with_triangles: bool, budget: int) -> ExactResult:
    elems = _cover_universe(g, with_triangles)
    if not elems:
        return ExactResult(0, [])
    where = {e: i for i, e in enumerate(elems)}
    cliques = [c for c in maximal_cliques(g) if len(c) >= 2]
    sets = []
    for c in cliques:
        members = sorted(c)
        covered = [where[p] for p in combinations(members, 2)]
        if with_triangles:
            covered += [where[t] for t in combinations(members, 3)]
        sets.append(frozenset(covered))
    chosen = exact_set_cover(len(elems), sets, budget)
    return ExactResult(len(chosen), [sorted(cliques[i]) for i in chosen])


def exact_etcc(g: Graph, budget: int = DEFAULT_COVER_BUDGET) -> ExactResult:
    """Fewest cliques covering every edge and every triangle."""
    return _exact_clique_cover(g, True, budget)


def exact_ecc(g: Graph, budget: int = DEFAULT_COVER_BUDGET) -> ExactResult:
    """Fewest cliques covering every edge (the intersection number)."""
    return _exact_clique_cover(g, False, budget)


def exact_best_assignment(g: Graph, M: int, weights) -> ExactResult:
    """Highest raw score over every map ``V -> subsets of {1..M}``.

    Evaluated in chunks over the whole state space with its own
    vectorised scorer. ``weights`` is any object with ``a_e, a_ne, a_t, a_nt``.
    The optimum is the raw score and the witness holds one bitmask per
    vertex; ties go to the first assignment in enumeration order.
    """
    n = g.n
    states = (2**M) ** n
    if states > MAX_ASSIGNMENT_STATES:
        raise ResourceGuardError(f"{states} assignments exceed the limit of {MAX_ASSIGNMENT_STATES}")
    adj = g.adj
    pairs = list(combinations(range(n), 2))
    trips = list(combinations(range(n), 3))
    is_edge = np.array([adj[u, v] for u, v in pairs], dtype=bool)
    is_tri = np.array([adj[u, v] and adj[u, w] and adj[v, w] for u, v, w in trips], dtype=bool)
    n_e, n_t = int(is_edge.sum()), int(is_tri.sum())
    # terms with an empty category are skipped
    a_e = weights.a_e if n_e else 0.0
    a_ne = weights.a_ne if len(pairs) - n_e else 0.0
    a_t = weights.a_t if n_t else 0.0
    a_nt = weights.a_nt if len(trips) - n_t else 0.0

    base = 2**M
    best_score, best_idx = -np.inf, 0
    chunk = 1 << 16
    pu = np.array([p[0] for p in pairs], dtype=int)
    pv = np.array([p[1] for p in pairs], dtype=int)
    tu, tv, tw = (np.array([t[c] for t in trips], dtype=int) for c in range(3))
    for start in range(0, states, chunk):
        idx = np.arange(start, min(states, start + chunk), dtype=np.int64)
        digits = np.empty((idx.size, n), dtype=np.int64)
        rest = idx.copy()
        for v in range(n):
            digits[:, v] = rest % base
            rest //= base
        score = np.zeros(idx.size)
        if pairs:
            meet = (digits[:, pu] & digits[:, pv]) != 0
            score += a_e * meet[:, is_edge].sum(1) + a_ne * (~meet[:, ~is_edge]).sum(1)
        if trips:
            meet3 = (digits[:, tu] & digits[:, tv] & digits[:, tw]) != 0
            score += a_t * meet3[:, is_tri].sum(1) + a_nt * (~meet3[:, ~is_tri]).sum(1)
        k = int(np.argmax(score))
        if score[k] > best_score:
            best_score, best_idx = float(score[k]), int(idx[k])
    assignment = [(best_idx // base**v) % base for v in range(n)]
    return ExactResult(best_score, np.array(assignment, dtype=np.int64))


def score_upper_limit(g: Graph, weights) -> float:
    """Raw score of an exact edge-triangle representation (every term satisfied)."""
    n_pairs, n_trips = comb(g.n, 2), comb(g.n, 3)
    n_e = g.edge_count
    n_t = len(enumerate_triangles(g))
    return (
        (weights.a_e * n_e if n_e else 0.0)
        + (weights.a_ne * (n_pairs - n_e) if n_pairs - n_e else 0.0)
        + (weights.a_t * n_t if n_t else 0.0)
        + (weights.a_nt * (n_trips - n_t) if n_trips - n_t else 0.0)
    )
