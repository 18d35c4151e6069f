import highspy
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motifclust.errors import LPUnsolvedError
from motifclust.graph import complete_graph
from motifclust.instance import WeightedInstance, build_instance, mmcc_cost, random_instance
from motifclust.lp import build_lp, export_lp, import_solution, integral_point, solve_lp
from motifclust.oracles import exact_mmcc, restricted_growth_strings


def const_instance(n, w):
    i, j, k = np.indices((n, n, n))
    distinct = (i != j) & (j != k) & (i != k)
    return WeightedInstance(n, np.where(~np.eye(n, dtype=bool), w, 0.0), np.where(distinct, w, 0.0))


def test_counts_n3():
    m = build_lp(build_instance(complete_graph(3)))
    assert m.num_vars == 4
    assert m.names == ["x_0_1", "x_0_2", "x_1_2", "x_0_1_2"]
    assert m.family_counts() == {"a": 3, "b": 2, "c": 3}


def test_counts_n34(karate):
    m = build_lp(build_instance(karate))
    assert m.num_vars == 561 + 5984 == 6545
    assert m.family_counts() == {"a": 3 * 5984, "b": 2 * 5984, "c": 3 * 5984}


def test_n2_has_one_variable_and_no_rows():
    m = build_lp(const_instance(2, 0.3))
    assert m.num_vars == 1 and m.A.shape[0] == 0
    sol = solve_lp(m, "simplex")
    assert sol.x[0] == pytest.approx(1.0)
    assert sol.objective == pytest.approx(0.3)


@pytest.mark.parametrize("method", ["simplex", "highs", "external"])
def test_all_similar_gives_zero(method):
    sol = solve_lp(build_lp(const_instance(5, 1.0)), method)
    assert sol.objective == pytest.approx(0.0, abs=1e-9)
    assert np.allclose(sol.x, 0.0, atol=1e-9)


@pytest.mark.parametrize("method", ["simplex", "highs", "external"])
def test_all_dissimilar_gives_ones(method):
    sol = solve_lp(build_lp(const_instance(5, 0.0)), method)
    assert sol.objective == pytest.approx(0.0, abs=1e-9)
    assert np.allclose(sol.x, 1.0, atol=1e-9)


@given(st.integers(3, 7), st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_backends_agree_and_bound_the_optimum(n, seed):
    inst = random_instance(n, np.random.default_rng(seed), 1.0, 1.5)
    m = build_lp(inst)
    a, b = solve_lp(m, "simplex"), solve_lp(m, "highs")
    assert a.objective == pytest.approx(b.objective, abs=1e-6)
    assert m.max_violation(a.x) <= 1e-7 and m.max_violation(b.x) <= 1e-7
    assert a.objective <= exact_mmcc(inst).optimum + 1e-6


@pytest.mark.parametrize("n", range(1, 7))
def test_every_partition_is_feasible_with_matching_objective(n, rng):
    inst = random_instance(n, rng)
    m = build_lp(inst)
    for lab in restricted_growth_strings(n):
        x = integral_point(m, lab)
        assert m.max_violation(x) == 0
        assert m.objective(x) == pytest.approx(mmcc_cost(inst, lab), abs=1e-12)


def test_lp_export_declares_each_variable_once():
    text = export_lp(build_lp(build_instance(complete_graph(3))), "lp")
    bounds = text.split("Bounds\n")[1].split("End")[0]
    assert len(bounds.strip().splitlines()) == 4
    for nm in ("x_0_1", "x_0_2", "x_1_2", "x_0_1_2"):
        assert f"0 <= {nm} <= 1" in bounds


@pytest.mark.parametrize("fmt", ["lp", "mps"])
def test_export_reads_back_into_highs(fmt, tmp_path, rng):
    m = build_lp(random_instance(5, rng))
    path = tmp_path / f"model.{fmt}"
    path.write_text(export_lp(m, fmt))
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    assert h.readModel(str(path)) == highspy.HighsStatus.kOk
    h.run()
    assert h.getInfo().objective_function_value == pytest.approx(solve_lp(m, "highs").objective, abs=1e-5)


def test_export_n2():
    m = build_lp(const_instance(2, 0.3))
    assert "x_0_1" in export_lp(m, "lp") and "x_0_1" in export_lp(m, "mps")


def test_import_solution_roundtrip_and_errors(rng):
    m = build_lp(random_instance(4, rng))
    sol = solve_lp(m, "highs")
    text = "# comment\n" + "".join(f"{nm} {float(v)!r}\n" for nm, v in zip(m.names, sol.x))
    back = import_solution(m, text)
    assert back.objective == pytest.approx(sol.objective)
    with pytest.raises(LPUnsolvedError):
        import_solution(m, text + "x_9_9 0.5\n")
    with pytest.raises(LPUnsolvedError):
        import_solution(m, "\n".join(text.splitlines()[:-1]))
    with pytest.raises(LPUnsolvedError):
        import_solution(m, text + f"{m.names[0]} abc\n")
    bad = text.replace(f"{m.names[0]} {float(sol.x[0])!r}", f"{m.names[0]} 2.0")
    with pytest.raises(LPUnsolvedError):
        import_solution(m, bad)


def test_iteration_limit_raises(rng):
    with pytest.raises(LPUnsolvedError):
        solve_lp(build_lp(random_instance(6, rng)), "simplex", max_iter=2)


def test_unknown_method():
    with pytest.raises(ValueError):
        solve_lp(build_lp(const_instance(3, 0.5)), "magic")
