"""Region-growing rounding of the LP relaxation, and the end-to-end pipeline."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .graph import Graph
from .instance import WeightConfig, build_instance, mmcc_cost
from .lp import LPSolution, build_lp, solve_lp

# absorbs LP round-off in the neighbourhood and threshold comparisons
ROUND_TOL = 1e-9


@dataclass(frozen=True)
class RoundingParams:
    alpha: float = 1 / 3
    beta: float = 1 / 3
    pivot_rule: str = "ascending"  # or "random"
    seed: int | None = None

    def validate(self, require_guarantee: bool = False) -> None:
        if self.pivot_rule not in ("ascending", "random"):
            raise ConfigError(f"unknown pivot rule {self.pivot_rule!r}")
        if self.alpha <= 0 or self.beta <= 0:
            raise ConfigError("alpha and beta must be positive")
        if require_guarantee and (self.alpha > 1 / 3 or self.beta > 1 / 3):
            raise ConfigError("the factor-9 guarantee needs alpha, beta <= 1/3")


def round_solution(sol: LPSolution | np.ndarray, params: RoundingParams = RoundingParams()) -> np.ndarray:
    """Turn fractional pair distances into a partition (returned as labels).

    Repeatedly take a pivot ``u`` among the unclustered vertices and its
    close set ``N = {v : x_uv <= alpha}``. If the mean distance to ``N``
    exceeds ``beta * alpha`` the pivot becomes a singleton, otherwise
    ``N + u`` becomes a cluster. Stops once fewer than three vertices
    remain; those become singletons.
    """
    params.validate()
    x = sol.x_pair if isinstance(sol, LPSolution) else np.asarray(sol, dtype=float)
    n = x.shape[0]
    rng = np.random.default_rng(params.seed) if params.pivot_rule == "random" else None
    labels = np.full(n, -1, dtype=int)
    remaining = list(range(n))
    next_label = 0
    while True:
        u = remaining[0] if rng is None else remaining[int(rng.integers(len(remaining)))]
        others = np.array([v for v in remaining if v != u], dtype=int)
        close = others[x[u, others] <= params.alpha + ROUND_TOL]
        if x[u, close].sum() > params.beta * params.alpha * close.size + ROUND_TOL:
            cluster = [u]
        else:
            cluster = [u, *close.tolist()]
        labels[cluster] = next_label
        next_label += 1
        taken = set(cluster)
        remaining = [v for v in remaining if v not in taken]
        if len(remaining) < 3:
            break
    for v in remaining:
        labels[v] = next_label
        next_label += 1
    return labels


@dataclass(frozen=True)
class MMCCResult:
    labels: np.ndarray
    lp_objective: float
    rounded_cost: float
    lp: LPSolution

    @property
    def ratio(self) -> float:
        if self.lp_objective > 0:
            return self.rounded_cost / self.lp_objective
        return 1.0 if self.rounded_cost == 0 else float("inf")


def cluster_mmcc(
    g: Graph,
    cfg: WeightConfig = WeightConfig(),
    params: RoundingParams = RoundingParams(),
    method: str = "auto",
) -> MMCCResult:
    inst = build_instance(g, cfg)
    sol = solve_lp(build_lp(inst), method=method)
    labels = round_solution(sol, params)
    return MMCCResult(labels, sol.objective, mmcc_cost(inst, labels), sol)
