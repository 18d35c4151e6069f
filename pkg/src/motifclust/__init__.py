"""Motif (edge + triangle) correlation clustering and overlapping community detection."""
from .anneal_cover import (
    AnnealParams,
    FeatureAssignment,
    ScoreWeights,
    anneal,
    communities_of,
    default_weights,
    normalized_score,
    score,
    score_delta,
)
from .bounds import alon_bound, ecc_bound, etcc_bound, random_cover
from .graph import Graph, enumerate_triangles, maximal_cliques, parse_edge_list, read_edge_list, turan_graph
from .instance import WeightConfig, WeightedInstance, build_instance, mmcc_cost
from .lp import build_lp, export_lp, import_solution, solve_lp
from .mmcc import RoundingParams, cluster_mmcc, round_solution

__version__ = "0.1.0"
