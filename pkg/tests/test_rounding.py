import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motifclust.errors import ConfigError
from motifclust.instance import WeightConfig, build_instance, clusters_from_labels, mmcc_cost, random_instance
from motifclust.lp import build_lp, solve_lp
from motifclust.mmcc import RoundingParams, cluster_mmcc, round_solution
from motifclust.oracles import exact_mmcc

from conftest import two_triangles


def off_diag(n, value):
    return np.where(np.eye(n, dtype=bool), 0.0, value)


@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_zero_distances_give_one_cluster(n):
    assert round_solution(off_diag(n, 0.0)).tolist() == [0] * n


@pytest.mark.parametrize("rule", ["ascending", "random"])
def test_unit_distances_give_singletons(rule):
    lab = round_solution(off_diag(6, 1.0), RoundingParams(pivot_rule=rule, seed=4))
    assert sorted(lab.tolist()) == list(range(6))


@given(st.integers(1, 12), st.integers(0, 2**32 - 1), st.sampled_from(["ascending", "random"]))
@settings(max_examples=80, deadline=None)
def test_output_is_a_partition(n, seed, rule):
    r = np.random.default_rng(seed)
    x = r.random((n, n))
    x = np.triu(x, 1)
    x = x + x.T
    lab = round_solution(x, RoundingParams(pivot_rule=rule, seed=seed))
    assert lab.shape == (n,) and (lab >= 0).all()
    flat = sorted(v for c in clusters_from_labels(lab) for v in c)
    assert flat == list(range(n))


def test_random_pivot_is_reproducible(rng):
    x = solve_lp(build_lp(random_instance(7, rng)), "highs").x_pair
    p = RoundingParams(pivot_rule="random", seed=11)
    assert np.array_equal(round_solution(x, p), round_solution(x, p))


def test_params_validation():
    with pytest.raises(ConfigError):
        RoundingParams(pivot_rule="max").validate()
    with pytest.raises(ConfigError):
        RoundingParams(alpha=0).validate()
    with pytest.raises(ConfigError):
        RoundingParams(alpha=0.5).validate(require_guarantee=True)
    RoundingParams(alpha=0.5).validate()


def test_two_triangles_recovered():
    res = cluster_mmcc(two_triangles(), WeightConfig(nonedge_dissim_coeff=0.0, nonedge_dissim=0.0))
    assert sorted(map(sorted, clusters_from_labels(res.labels))) == [[0, 1, 2], [3, 4, 5]]
    assert res.rounded_cost == pytest.approx(res.lp_objective)


@given(st.integers(3, 7), st.integers(0, 2**32 - 1), st.sampled_from(["ascending", "random"]))
@settings(max_examples=30, deadline=None)
def test_rounded_cost_within_factor_nine(n, seed, rule):
    inst = random_instance(n, np.random.default_rng(seed), 1.0, 1.0)
    sol = solve_lp(build_lp(inst), "highs")
    lab = round_solution(sol, RoundingParams(pivot_rule=rule, seed=seed))
    opt = exact_mmcc(inst).optimum
    assert sol.objective <= opt + 1e-6
    assert mmcc_cost(inst, lab) <= 9 * sol.objective + 1e-6


@pytest.mark.parametrize("lam", [1, 2])
def test_karate_within_factor_nine(karate, lam):
    res = cluster_mmcc(karate, WeightConfig(nonedge_dissim_coeff=0.2, lambda2=lam), method="highs")
    assert res.rounded_cost <= 9 * res.lp_objective + 1e-6
    assert res.ratio >= 1 - 1e-9
