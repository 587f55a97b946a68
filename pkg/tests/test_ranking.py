"""Ranking schemes, n_b(n_c) curves, and the ensemble comparison."""

import numpy as np
import pytest

from netctrl import (
    DirectedGraph,
    EstimatorConfig,
    GeneratorSpec,
    RankingScheme,
    default_grid,
    ensemble_experiment,
    estimate,
    generate_erdos_renyi,
    measured_driver_fraction,
    nb_curve,
    rank_nodes,
    scheme_curve,
)


def toy():
    return DirectedGraph.from_edges(3, [(1, 2)])


def test_scheme_validation():
    with pytest.raises(ValueError):
        RankingScheme("weird")
    assert RankingScheme("random", seed=3).seed == 3


def test_contribution_ranking_on_toy():
    g = toy()
    e = estimate(g, EstimatorConfig(master_seed=0))
    order = rank_nodes(g, RankingScheme("contribution-desc"), e)
    assert order[0] == 1
    assert order == [1, 0, 2]


def test_control_schemes_need_estimates():
    with pytest.raises(ValueError):
        rank_nodes(toy(), RankingScheme("capacity-desc"))


def test_degree_schemes_ascending_with_id_ties():
    g = DirectedGraph.from_edges(4, [(0, 1), (0, 2), (3, 2)])
    # in-degrees (0, 1, 2, 0): ascending, ties by node id
    assert rank_nodes(g, RankingScheme("indegree-asc")) == [0, 3, 1, 2]
    # out-degrees (2, 0, 0, 1)
    assert rank_nodes(g, RankingScheme("outdegree-asc")) == [1, 2, 3, 0]


def test_random_scheme_is_a_seeded_permutation():
    g = generate_erdos_renyi(20, 30, seed=0)
    a = rank_nodes(g, RankingScheme("random", seed=5))
    b = rank_nodes(g, RankingScheme("random", seed=5))
    c = rank_nodes(g, RankingScheme("random", seed=6))
    assert a == b
    assert sorted(a) == list(range(20))
    assert a != c


def test_measured_driver_fraction():
    assert measured_driver_fraction(toy()) == pytest.approx(2 / 3)
    cyc = DirectedGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert measured_driver_fraction(cyc) == pytest.approx(1 / 3)


def test_default_grid_spans_to_nd():
    grid = default_grid(0.4, points=8)
    assert len(grid) == 8
    assert grid[0] == pytest.approx(0.05)
    assert grid[-1] == pytest.approx(0.4)
    assert all(b > a for a, b in zip(grid, grid[1:]))


def test_toy_curve_values():
    # drivers in ranked order [1, 0, 2]; exact dims are 2 then 3
    g = toy()
    curve = nb_curve(g, [1, 0, 2], [1 / 3, 2 / 3], trials=3, seed=0)
    ys = [y for _, y in curve.points]
    assert ys == pytest.approx([2 / 3, 1.0])
    assert curve.auc == pytest.approx(np.trapezoid([2 / 3, 1.0], [1 / 3, 2 / 3]))


def test_nb_curve_rejects_bad_grid_and_order():
    g = toy()
    with pytest.raises(ValueError):
        nb_curve(g, [1, 0, 2], [0.0, 0.5], seed=0)
    with pytest.raises(ValueError):
        nb_curve(g, [1, 0, 2], [0.9], seed=0)  # beyond measured n_d = 2/3
    with pytest.raises(ValueError):
        nb_curve(g, [1, 1, 2], [1 / 3], seed=0)


def test_curves_are_monotone_in_the_grid():
    g = generate_erdos_renyi(50, 75, seed=3)
    e = estimate(g, EstimatorConfig(master_seed=4))
    grid = default_grid(measured_driver_fraction(g), points=10)
    for kind in ("contribution-desc", "capacity-desc", "indegree-asc"):
        curve = scheme_curve(g, RankingScheme(kind), grid, estimates=e, trials=2, seed=5)
        ys = [y for _, y in curve.points]
        assert all(b >= a - 1e-12 for a, b in zip(ys, ys[1:]))
        assert curve.stderr is None


def test_random_scheme_curve_averages_orders():
    g = generate_erdos_renyi(40, 60, seed=6)
    grid = default_grid(measured_driver_fraction(g), points=5)
    curve = scheme_curve(g, RankingScheme("random", seed=7), grid, trials=2, seed=8)
    assert curve.stderr is not None
    assert len(curve.stderr) == 5
    assert all(s >= 0 for s in curve.stderr)


def test_scheme_curve_jobs_identical():
    g = generate_erdos_renyi(40, 60, seed=9)
    e = estimate(g, EstimatorConfig(master_seed=10))
    grid = default_grid(measured_driver_fraction(g), points=6)
    a = scheme_curve(g, RankingScheme("contribution-desc"), grid, estimates=e, trials=2, seed=11, jobs=1)
    b = scheme_curve(g, RankingScheme("contribution-desc"), grid, estimates=e, trials=2, seed=11, jobs=3)
    assert a.points == b.points
    assert a.auc == b.auc


def test_generator_spec_build():
    spec = GeneratorSpec("er", 30, 45)
    g = spec.build(seed=1)
    assert g.node_count == 30 and g.edge_count == 45
    sf = GeneratorSpec("sf", 50, 120, gamma=2.7).build(seed=2)
    assert sf.edge_count == 120
    with pytest.raises(ValueError):
        GeneratorSpec("ba", 10, 20)


def test_small_ensemble_runs_and_summarizes():
    res = ensemble_experiment(
        GeneratorSpec("er", 30, 45), runs=6, grid_points=6, master_seed=1, trials=2
    )
    assert res.runs_requested == 6
    assert len(res.rs0) == len(res.rs1) == 6
    assert res.failures == ()
    assert res.test_name == "sign"
    assert 0.0 <= res.p_value <= 1.0
    s = res.summary()
    assert s["runs_used"] == 6
    assert set(s["means"]) == {"rs0", "rs1"}


def test_ensemble_determinism_across_jobs():
    spec = GeneratorSpec("er", 25, 40)
    a = ensemble_experiment(spec, runs=5, grid_points=5, master_seed=2, trials=2, jobs=1)
    b = ensemble_experiment(spec, runs=5, grid_points=5, master_seed=2, trials=2, jobs=3)
    assert a.rs0 == b.rs0
    assert a.rs1 == b.rs1
    assert a.p_value == b.p_value


def test_ensemble_wilcoxon_option():
    res = ensemble_experiment(
        GeneratorSpec("er", 25, 40), runs=5, grid_points=5, master_seed=3,
        trials=2, use_wilcoxon=True,
    )
    assert res.test_name == "wilcoxon"
    assert 0.0 <= res.p_value <= 1.0
