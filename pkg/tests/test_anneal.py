from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motifclust.anneal_cover import (
    AnnealParams,
    FeatureAssignment,
    Scorer,
    ScoreWeights,
    anneal,
    communities_of,
    default_rounds,
    default_weights,
    normalized_score,
    score,
    score_delta,
)
from motifclust.graph import Graph, complete_graph, enumerate_triangles, random_graph, turan_graph

from conftest import two_triangles


def is_exact_representation(g, sets):
    """Every pair and triple agrees with the graph."""
    S = [set(s) for s in sets]
    for u, v in combinations(range(g.n), 2):
        if bool(S[u] & S[v]) != bool(g.adj[u, v]):
            return False
    tris = set(enumerate_triangles(g))
    for t in combinations(range(g.n), 3):
        if bool(S[t[0]] & S[t[1]] & S[t[2]]) != (t in tris):
            return False
    return True


def naive_score(g, sets, w):
    S = [set(s) for s in sets]
    total = 0.0
    for u, v in combinations(range(g.n), 2):
        meet = bool(S[u] & S[v])
        total += w.a_e if (g.adj[u, v] and meet) else 0.0
        total += w.a_ne if (not g.adj[u, v] and not meet) else 0.0
    tris = set(enumerate_triangles(g))
    for t in combinations(range(g.n), 3):
        meet = bool(S[t[0]] & S[t[1]] & S[t[2]])
        total += w.a_t if (t in tris and meet) else 0.0
        total += w.a_nt if (t not in tris and not meet) else 0.0
    return total


def test_karate_default_weights(karate):
    w = default_weights(karate)
    assert w.a_e == 1.0
    assert w.a_ne == pytest.approx(78 / 483)
    assert w.a_t == pytest.approx(78 / 45)
    assert w.a_nt == pytest.approx(78 / 5939)


def test_degenerate_categories_get_zero_weight():
    assert default_weights(complete_graph(4)).a_ne == 0.0
    assert default_weights(complete_graph(4)).a_nt == 0.0
    c4 = default_weights(turan_graph(4, 2))
    assert c4.a_t == 0.0
    assert c4.a_nt == pytest.approx(1.0)


@given(st.integers(3, 10), st.floats(0.05, 0.95), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_each_category_has_equal_mass(n, p, seed):
    g = random_graph(n, p, np.random.default_rng(seed))
    sc = Scorer(g)
    masses = [a * c for a, c in zip(sc.coef, sc.counts) if c]
    if g.edge_count:
        assert np.allclose(masses, g.edge_count)


def test_k4_single_feature_is_exact():
    g = complete_graph(4)
    A = FeatureAssignment.from_sets(1, [[1]] * 4)
    assert score(g, A) == pytest.approx(12.0)
    assert normalized_score(g, A) == 1.0


def test_empty_assignment_scores_only_negatives(karate):
    w = default_weights(karate)
    A = FeatureAssignment.empty(34, 3)
    assert score(karate, A) == pytest.approx(483 * w.a_ne + 5939 * w.a_nt)


def test_k3_delta():
    g = complete_graph(3)
    A = FeatureAssignment.from_sets(1, [[1]] * 3)
    assert score_delta(g, A, 0, []) == pytest.approx(-5.0)
    assert score_delta(g, A, 0, 1) == 0.0


@given(
    st.integers(1, 9), st.floats(0, 1), st.integers(1, 4), st.integers(0, 2**32 - 1),
    st.tuples(*[st.floats(0, 3)] * 4),
)
@settings(max_examples=120, deadline=None)
def test_delta_matches_full_recompute(n, p, M, seed, ws):
    r = np.random.default_rng(seed)
    g = random_graph(n, p, r)
    w = ScoreWeights(*ws)
    A = FeatureAssignment(M, r.integers(1 << M, size=n))
    u, new = int(r.integers(n)), int(r.integers(1 << M))
    sc = Scorer(g, w)
    expected = sc.score(A.with_vertex(u, new).masks) - sc.score(A.masks)
    assert sc.delta(A.masks, u, new) == pytest.approx(expected, abs=1e-9)


@given(st.integers(1, 8), st.floats(0, 1), st.integers(1, 3), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_vectorized_score_matches_naive(n, p, M, seed):
    r = np.random.default_rng(seed)
    g = random_graph(n, p, r)
    sc = Scorer(g)
    A = FeatureAssignment(M, r.integers(1 << M, size=n))
    w = ScoreWeights(*sc.coef)
    assert sc.score(A.masks) == pytest.approx(naive_score(g, A.sets(), w), abs=1e-9)
    assert 0.0 <= sc.normalized(sc.score(A.masks)) <= 1.0 + 1e-12


def all_graphs(n):
    pairs = list(combinations(range(n), 2))
    for bits in product([0, 1], repeat=len(pairs)):
        yield Graph.from_edges(n, [e for e, b in zip(pairs, bits) if b])


@pytest.mark.parametrize("n, M", [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 2)])
def test_normalized_one_iff_exact_representation(n, M):
    for g in all_graphs(n):
        if g.edge_count == 0:
            continue
        sc = Scorer(g)
        for combo in product(range(1 << M), repeat=n):
            masks = np.array(combo, dtype=np.int64)
            A = FeatureAssignment(M, masks)
            hit = sc.normalized(sc.score(masks)) >= 1 - 1e-12
            assert hit == is_exact_representation(g, A.sets())


def test_communities_of():
    A = FeatureAssignment.from_sets(3, [[1], [1, 3], [], [3]])
    assert communities_of(A) == [[0, 1], [1, 3]]
    assert communities_of(FeatureAssignment.empty(3, 2)) == []


def test_from_sets_validation():
    with pytest.raises(ValueError):
        FeatureAssignment.from_sets(2, [[3]])
    with pytest.raises(ValueError):
        FeatureAssignment(0, np.zeros(2))
    with pytest.raises(ValueError):
        FeatureAssignment(2, np.array([4]))


def test_default_rounds():
    assert default_rounds(1) == 1
    assert default_rounds(34) == int(np.ceil(20 * 34 * np.log(34)))


def test_trace_is_nondecreasing_and_reproducible(karate):
    p = AnnealParams(M=2, rounds=800, seed=5)
    a, b = anneal(karate, p), anneal(karate, p)
    assert a.assignment == b.assignment and a.score == b.score
    assert np.all(np.diff(a.trace) >= 0)
    assert a.trace[-1] == pytest.approx(a.normalized_score)
    assert a.score == pytest.approx(score(karate, a.assignment))


def test_restarts_keep_the_best_chain(karate):
    res = anneal(karate, AnnealParams(M=2, rounds=300, seed=7, restarts=3))
    assert len(res.chain_scores) == 3
    assert res.normalized_score == max(res.chain_scores)
    first = res.chain_scores.index(max(res.chain_scores))
    assert res.seed == 7 + first


@pytest.mark.parametrize("accept", ["raw", "normalized"])
def test_k4_reaches_one(accept):
    res = anneal(complete_graph(4), AnnealParams(M=1, seed=0, accept=accept))
    assert res.normalized_score == 1.0


def test_two_triangles_reach_one():
    res = anneal(two_triangles(), AnnealParams(M=2, seed=0, restarts=5))
    assert res.normalized_score == pytest.approx(1.0)
    comms = sorted(map(sorted, communities_of(res.assignment)))
    assert comms == [[0, 1, 2], [3, 4, 5]]


def test_bad_params():
    with pytest.raises(ValueError):
        anneal(complete_graph(3), AnnealParams(M=1, init="warm"))
    with pytest.raises(ValueError):
        anneal(complete_graph(3), AnnealParams(M=1, restarts=0))
    with pytest.raises(ValueError):
        ScoreWeights(a_e=-1)
