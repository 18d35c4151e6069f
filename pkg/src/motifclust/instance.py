"""Weighted complete instances and the mixed edge/triangle clustering cost."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .errors import ConfigError, ResourceGuardError
from .graph import Graph, triangle_tensor

MAX_DENSE_N = 500


@dataclass(frozen=True)
class WeightConfig:
    """How a raw graph is turned into similarity weights.

    The non-edge knob is a single value: ``nonedge_dissim`` sets it
    directly, otherwise it is ``1/2 - nonedge_dissim_coeff * density``. With
    ``nonedge_dissim_interval = (c_lo, c_hi)`` every non-edge draws its own
    value uniformly from ``[1/2 - c_hi*density, 1/2 - c_lo*density]`` using
    ``seed``.

    ``nonedge_role`` says where that value goes. ``"similarity"`` (default)
    uses it as the non-edge similarity w, the price of splitting the pair,
    so a value just under 1/2 leans slightly towards separating non-adjacent
    vertices; this is the setting under which the karate recipes in the
    README recover the two factions. ``"dissimilarity"`` uses it as 1 - w,
    the price of keeping the pair together.
    """

    edge_sim: float = 1.0
    nonedge_dissim: float | None = None
    nonedge_dissim_coeff: float = 0.0
    nonedge_dissim_interval: tuple[float, float] | None = None
    triangle_sim: float = 1.0
    nontriangle_sim: float = 0.5
    lambda1: float = 1.0
    lambda2: float = 1.0
    seed: int | None = None
    nonedge_role: str = "similarity"

    def validate(self) -> None:
        for name in ("edge_sim", "triangle_sim", "nontriangle_sim"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ConfigError(f"{name}={val} outside [0, 1]")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ConfigError("relevance factors must be non-negative")
        if self.nonedge_role not in ("similarity", "dissimilarity"):
            raise ConfigError(f"nonedge_role must be 'similarity' or 'dissimilarity', got {self.nonedge_role!r}")
        if self.nonedge_dissim_coeff < 0:
            raise ConfigError("nonedge_dissim_coeff must be non-negative")
        if self.nonedge_dissim_interval is not None:
            lo, hi = self.nonedge_dissim_interval
            if not 0 <= lo <= hi:
                raise ConfigError(f"bad dissimilarity coefficient interval {self.nonedge_dissim_interval}")

    def resolve_nonedge_dissim(self, density: float) -> float:
        if self.nonedge_dissim is not None:
            d = self.nonedge_dissim
        else:
            d = 0.5 - self.nonedge_dissim_coeff * density
        if not 0.0 <= d <= 1.0:
            raise ConfigError(f"resolved non-edge weight {d} outside [0, 1]")
        return d

    def nonedge_similarity(self, value):
        return value if self.nonedge_role == "similarity" else 1.0 - value


@dataclass(frozen=True, eq=False)
class WeightedInstance:
    """Dense similarity weights for every pair and every triple of ``0..n-1``.

    ``w_pair[i, j]`` and ``w_triple[i, j, k]`` are fully symmetric; entries
    with repeated indices are meaningless and kept at zero.
    """

    n: int
    w_pair: np.ndarray = field(repr=False)
    w_triple: np.ndarray = field(repr=False)
    lambda1: float = 1.0
    lambda2: float = 1.0

    def __post_init__(self):
        for arr in (self.w_pair, self.w_triple):
            if arr.size and (arr.min() < 0 or arr.max() > 1):
                raise ConfigError("weights must lie in [0, 1]")
            arr.setflags(write=False)

    @classmethod
    def from_tables(cls, n: int, pair: dict, triple: dict, lambda1=1.0, lambda2=1.0) -> "WeightedInstance":
        """Build from ``{(i, j): w}`` and ``{(i, j, k): w}`` maps over sorted tuples."""
        wp = np.zeros((n, n))
        for (i, j), w in pair.items():
            wp[i, j] = wp[j, i] = w
        wt = np.zeros((n, n, n))
        for (i, j, k), w in triple.items():
            for a, b, c in ((i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)):
                wt[a, b, c] = w
        return cls(n, wp, wt, lambda1, lambda2)

    def pair_weight(self, i: int, j: int) -> float:
        return float(self.w_pair[i, j])

    def triple_weight(self, i: int, j: int, k: int) -> float:
        return float(self.w_triple[i, j, k])


def _symmetrize_triples(upper: np.ndarray, n: int) -> np.ndarray:
    i, j, k = triple_arrays(n)
    vals = upper[i, j, k]
    out = np.zeros((n, n, n))
    for a, b, c in ((i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)):
        out[a, b, c] = vals
    return out


@lru_cache(maxsize=32)
def triple_arrays(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index arrays of all ``i < j < k`` in lexicographic order."""
    trip = np.array(list(combinations(range(n), 3)), dtype=np.intp).reshape(-1, 3)
    cols = tuple(trip[:, c].copy() for c in range(3))
    for c in cols:
        c.setflags(write=False)
    return cols


def build_instance(g: Graph, cfg: WeightConfig = WeightConfig(), force: bool = False) -> WeightedInstance:
    """Weighted complete instance for ``g`` under ``cfg``."""
    cfg.validate()
    if g.n > MAX_DENSE_N and not force:
        raise ResourceGuardError(f"n={g.n} exceeds the dense-instance ceiling of {MAX_DENSE_N}; pass force=True")
    n = g.n
    density = g.density()
    offdiag = ~np.eye(n, dtype=bool)
    if cfg.nonedge_dissim_interval is not None:
        lo, hi = cfg.nonedge_dissim_interval
        d_lo, d_hi = 0.5 - hi * density, 0.5 - lo * density
        if d_lo < 0 or d_hi > 1:
            raise ConfigError(f"dissimilarity interval [{d_lo}, {d_hi}] leaves [0, 1]")
        rng = np.random.default_rng(cfg.seed)
        draw = np.triu(rng.uniform(d_lo, d_hi, size=(n, n)), 1)
        nonedge_sim = cfg.nonedge_similarity(draw + draw.T)
    else:
        nonedge_sim = np.full((n, n), cfg.nonedge_similarity(cfg.resolve_nonedge_dissim(density)))
    w_pair = np.where(g.adj, cfg.edge_sim, nonedge_sim) * offdiag

    tri = triangle_tensor(g)
    i, j, k = np.indices((n, n, n))
    distinct = (i != j) & (j != k) & (i != k)
    w_triple = np.where(tri, cfg.triangle_sim, cfg.nontriangle_sim) * distinct
    return WeightedInstance(n, w_pair, w_triple, cfg.lambda1, cfg.lambda2)


def random_instance(n: int, rng: np.random.Generator, lambda1=1.0, lambda2=1.0) -> WeightedInstance:
    """Pair and triple similarities drawn independently and uniformly from [0, 1]."""
    up = np.triu(rng.random((n, n)), 1)
    wt = _symmetrize_triples(rng.random((n, n, n)), n)
    return WeightedInstance(n, up + up.T, wt, lambda1, lambda2)


def labels_from_clusters(clusters: Sequence[Sequence[int]], n: int) -> np.ndarray:
    labels = np.full(n, -1, dtype=int)
    for c, members in enumerate(clusters):
        for v in members:
            if labels[v] != -1:
                raise ValueError(f"vertex {v} appears in more than one cluster")
            labels[v] = c
    if (labels < 0).any():
        raise ValueError(f"vertices {np.flatnonzero(labels < 0).tolist()} are not clustered")
    return labels


def clusters_from_labels(labels: Sequence[int]) -> list[list[int]]:
    """Clusters ordered by smallest member."""
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(v)
    return sorted(groups.values())


def mmcc_cost(inst: WeightedInstance, labels: Sequence[int]) -> float:
    """Mixed edge/triangle disagreement cost of the partition given by ``labels``.

    A pair inside one cluster costs ``1 - w``, a split pair costs ``w``;
    triples likewise, scaled by ``lambda2`` instead of ``lambda1``.
    """
    lab = np.asarray(labels)
    if lab.shape != (inst.n,):
        raise ValueError(f"expected {inst.n} labels, got shape {lab.shape}")
    n = inst.n
    same = lab[:, None] == lab[None, :]
    iu = np.triu_indices(n, 1)
    wp = inst.w_pair[iu]
    pair_cost = np.where(same[iu], 1.0 - wp, wp).sum()

    i, j, k = triple_arrays(n)
    wt = inst.w_triple[i, j, k]
    together = same[i, j] & same[j, k]
    triple_cost = np.where(together, 1.0 - wt, wt).sum()
    return float(inst.lambda1 * pair_cost + inst.lambda2 * triple_cost)


def max_cost(inst: WeightedInstance) -> float:
    return inst.lambda1 * comb(inst.n, 2) + inst.lambda2 * comb(inst.n, 3)
