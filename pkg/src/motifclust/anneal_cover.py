"""Overlapping communities from approximate edge-triangle intersection representations.

Each vertex gets a subset of features ``{1..M}``, stored as a bitmask
(feature ``k`` is bit ``k - 1``). A pair is *satisfied* when it is an edge
and the two subsets meet, or a non-edge and they are disjoint; a triple is
satisfied when it is a triangle and all three subsets share a feature, or
a non-triangle and they share none. The score is a weighted count of
satisfied pairs and triples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, comb, exp, log

import numpy as np

from .graph import Graph, enumerate_triangles, triangle_tensor
from .instance import triple_arrays

MAX_FEATURES = 62


@dataclass(frozen=True)
class ScoreWeights:
    a_e: float = 1.0
    a_ne: float = 1.0
    a_t: float = 1.0
    a_nt: float = 1.0

    def __post_init__(self):
        for v in (self.a_e, self.a_ne, self.a_t, self.a_nt):
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"score weights must be finite and non-negative, got {self}")


@dataclass(frozen=True, eq=False)
class FeatureAssignment:
    M: int
    masks: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.M <= MAX_FEATURES:
            raise ValueError(f"M must be in 1..{MAX_FEATURES}")
        masks = np.asarray(self.masks, dtype=np.int64).copy()
        if (masks < 0).any() or (masks >= (1 << self.M)).any():
            raise ValueError(f"feature sets must be subsets of 1..{self.M}")
        masks.setflags(write=False)
        object.__setattr__(self, "masks", masks)

    @classmethod
    def from_sets(cls, M: int, sets) -> "FeatureAssignment":
        masks = []
        for s in sets:
            m = 0
            for k in s:
                if not 1 <= k <= M:
                    raise ValueError(f"feature {k} outside 1..{M}")
                m |= 1 << (k - 1)
            masks.append(m)
        return cls(M, np.array(masks, dtype=np.int64))

    @classmethod
    def empty(cls, n: int, M: int) -> "FeatureAssignment":
        return cls(M, np.zeros(n, dtype=np.int64))

    def sets(self) -> list[list[int]]:
        return [[k + 1 for k in range(self.M) if (int(m) >> k) & 1] for m in self.masks]

    def with_vertex(self, u: int, mask: int) -> "FeatureAssignment":
        masks = self.masks.copy()
        masks[u] = mask
        return FeatureAssignment(self.M, masks)

    def __eq__(self, other):
        return isinstance(other, FeatureAssignment) and self.M == other.M and np.array_equal(self.masks, other.masks)


def default_weights(g: Graph) -> ScoreWeights:
    """Rewards that give each category the same total mass ``|E|``.

    A category with no members (no non-edges, no triangles, ...) gets weight 0.
    """
    n_e = g.edge_count
    n_ne = comb(g.n, 2) - n_e
    n_t = len(enumerate_triangles(g))
    n_nt = comb(g.n, 3) - n_t
    return ScoreWeights(
        a_e=1.0,
        a_ne=n_e / n_ne if n_ne else 0.0,
        a_t=n_e / n_t if n_t else 0.0,
        a_nt=n_e / n_nt if n_nt else 0.0,
    )


class Scorer:
    """Precomputed graph structure for full and incremental scoring."""

    def __init__(self, g: Graph, weights: ScoreWeights | None = None):
        self.g = g
        self.n = n = g.n
        self.weights = weights if weights is not None else default_weights(g)
        self.adj = g.adj
        self.tri = triangle_tensor(g)
        self.upper = np.triu(np.ones((n, n), dtype=bool), 1)
        n_e = g.edge_count
        n_t = len(enumerate_triangles(g))
        self.counts = (n_e, comb(n, 2) - n_e, n_t, comb(n, 3) - n_t)
        w = self.weights
        # categories with no terms contribute nothing
        self.coef = tuple(a if c else 0.0 for a, c in zip((w.a_e, w.a_ne, w.a_t, w.a_nt), self.counts))
        self.max_score = float(sum(a * c for a, c in zip(self.coef, self.counts)))

    def satisfied_counts(self, masks: np.ndarray) -> tuple[int, int, int, int]:
        """Numbers of satisfied edges, non-edges, triangles, non-triangles."""
        n = self.n
        meet = (masks[:, None] & masks[None, :]) != 0
        up = self.upper
        c_e = int((meet & self.adj & up).sum())
        c_ne = int((~meet & ~self.adj & up).sum())
        if n < 3:
            return c_e, c_ne, 0, 0
        i, j, k = triple_arrays(n)
        meet3 = (masks[i] & masks[j] & masks[k]) != 0
        tri = self.tri[i, j, k]
        return c_e, c_ne, int((meet3 & tri).sum()), int((~meet3 & ~tri).sum())

    def score(self, masks: np.ndarray) -> float:
        return float(sum(a * c for a, c in zip(self.coef, self.satisfied_counts(masks))))

    def normalized(self, raw: float) -> float:
        return raw / self.max_score if self.max_score > 0 else 1.0

    def delta(self, masks: np.ndarray, u: int, new_mask: int) -> float:
        """Raw score change from setting vertex ``u`` to ``new_mask``.

        Only the ``n - 1`` pairs and ``C(n-1, 2)`` triples containing ``u``
        are looked at.
        """
        old_mask = int(masks[u])
        if new_mask == old_mask:
            return 0.0
        others = np.ones(self.n, dtype=bool)
        others[u] = False
        adj_u = self.adj[u]

        d_meet = ((masks & new_mask) != 0).astype(np.int64) - ((masks & old_mask) != 0)
        d_meet[u] = 0
        d_e = int(d_meet[adj_u].sum())
        d_ne = -int(d_meet[~adj_u & others].sum())

        pair_and = masks[:, None] & masks[None, :]
        mask_vw = self.upper & others[:, None] & others[None, :]
        d3 = ((pair_and & new_mask) != 0).astype(np.int64) - ((pair_and & old_mask) != 0)
        tri_u = self.tri[u]
        d_t = int(d3[mask_vw & tri_u].sum())
        d_nt = -int(d3[mask_vw & ~tri_u].sum())
        a_e, a_ne, a_t, a_nt = self.coef
        return a_e * d_e + a_ne * d_ne + a_t * d_t + a_nt * d_nt


def score(g: Graph, A: FeatureAssignment, w: ScoreWeights | None = None) -> float:
    return Scorer(g, w).score(A.masks)


def normalized_score(g: Graph, A: FeatureAssignment, w: ScoreWeights | None = None) -> float:
    """Score over its best possible value; 1.0 exactly for an exact representation."""
    sc = Scorer(g, w)
    return sc.normalized(sc.score(A.masks))


def score_delta(g: Graph, A: FeatureAssignment, u: int, new_set, w: ScoreWeights | None = None) -> float:
    """``score(A with u -> new_set) - score(A)``; ``new_set`` is a bitmask or an iterable of features."""
    mask = new_set if isinstance(new_set, (int, np.integer)) else FeatureAssignment.from_sets(A.M, [new_set]).masks[0]
    return Scorer(g, w).delta(A.masks, u, int(mask))


def communities_of(A: FeatureAssignment) -> list[list[int]]:
    """Vertices carrying each feature, in feature order; empty features dropped."""
    out = []
    for k in range(A.M):
        members = np.flatnonzero((A.masks >> k) & 1).tolist()
        if members:
            out.append(members)
    return out


def default_rounds(n: int, factor: float = 20.0) -> int:
    return max(1, ceil(factor * n * log(n))) if n > 1 else 1


@dataclass(frozen=True)
class AnnealParams:
    M: int
    mu: float | None = None
    rounds: int | None = None
    seed: int = 0
    restarts: int = 1
    init: str = "random"  # or "empty"
    accept: str = "raw"  # or "normalized"
    rounds_factor: float = 20.0

    def resolved(self, n: int) -> "AnnealParams":
        if self.M < 1 or self.M > MAX_FEATURES:
            raise ValueError(f"M must be in 1..{MAX_FEATURES}")
        if self.init not in ("empty", "random") or self.accept not in ("normalized", "raw"):
            raise ValueError(f"bad init/accept setting: {self.init!r}, {self.accept!r}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        rounds = self.rounds if self.rounds is not None else default_rounds(n, self.rounds_factor)
        if rounds < 1:
            raise ValueError("rounds must be >= 1")
        mu = float(self.M) if self.mu is None else float(self.mu)
        return AnnealParams(self.M, mu, rounds, self.seed, self.restarts, self.init, self.accept, self.rounds_factor)


@dataclass(frozen=True, eq=False)
class AnnealResult:
    assignment: FeatureAssignment
    score: float
    normalized_score: float
    trace: np.ndarray = field(repr=False)
    seed: int
    rounds: int
    chain_scores: tuple[float, ...] = ()


def _chain(sc: Scorer, p: AnnealParams, seed: int) -> AnnealResult:
    rng = np.random.default_rng(seed)
    n, n_sets = sc.n, 1 << p.M
    if p.init == "random":
        masks = rng.integers(n_sets, size=n).astype(np.int64)
    else:
        masks = np.zeros(n, dtype=np.int64)
    cur = sc.score(masks)
    best, best_masks = cur, masks.copy()
    scale = 1.0 / sc.max_score if (p.accept == "normalized" and sc.max_score > 0) else 1.0
    trace = np.empty(p.rounds)
    for t in range(p.rounds):
        u = int(rng.integers(n))
        new = int(rng.integers(n_sets))
        r = rng.random()
        d = sc.delta(masks, u, new)
        step = p.mu * d * scale
        if step >= 0 or r < exp(step):
            masks[u] = new
            cur += d
            if cur > best:
                best, best_masks = cur, masks.copy()
        trace[t] = sc.normalized(best)
    # re-evaluate to drop accumulated round-off from the running total
    best = sc.score(best_masks)
    return AnnealResult(FeatureAssignment(p.M, best_masks), best, sc.normalized(best), trace, seed, p.rounds)


def anneal(g: Graph, params: AnnealParams, w: ScoreWeights | None = None) -> AnnealResult:
    """Simulated annealing over feature assignments, best of ``params.restarts`` chains.

    Chain ``i`` is seeded with ``params.seed + i``; ties between chains go
    to the lowest seed.
    """
    p = params.resolved(g.n)
    sc = Scorer(g, w)
    results = [_chain(sc, p, p.seed + i) for i in range(p.restarts)]
    best = results[0]
    for r in results[1:]:
        if r.score > best.score:
            best = r
    return AnnealResult(
        best.assignment, best.score, best.normalized_score, best.trace, best.seed, p.rounds,
        tuple(r.normalized_score for r in results),
    )
