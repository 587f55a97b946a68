"""Ranking schemes, controllable-fraction curves, and ensemble comparisons.

A ranking scheme orders the nodes; taking the top ceil(n_c * N) nodes as
drivers and measuring the controllable fraction n_b traces out a curve
n_b(n_c). The area under that curve summarizes how quickly a scheme finds
nodes that actually control the network, which lets schemes be compared on
one number. The ensemble experiment repeats this over freshly generated
networks and reports the relative advantage of contribution-based ranking
over capacity-based and range-based ranking.
"""

from __future__ import annotations

import math
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats as scipy_stats

from .graph import (
    DirectedGraph,
    GenerationError,
    generate_erdos_renyi,
    generate_scale_free,
)
from .matching import maximum_matching
from .metrics import ControlEstimates, EstimatorConfig, estimate
from .seeds import child_seeds
from .subspace import controllable_dim

SCHEME_KINDS = (
    "contribution-desc",
    "capacity-desc",
    "range-desc",
    "indegree-asc",
    "outdegree-asc",
    "random",
)
CONTROL_SCHEME_KINDS = ("contribution-desc", "capacity-desc", "range-desc")

#: Orders averaged for the random scheme in curve construction.
RANDOM_ORDER_REPEATS = 10


@dataclass(frozen=True)
class RankingScheme:
    kind: str
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme {self.kind!r}; choose from {SCHEME_KINDS}")


@dataclass(frozen=True)
class CurveResult:
    """n_b(n_c) curve for one scheme.

    ``points`` pairs each grid value n_c with the measured (or, for the
    random scheme, averaged) controllable fraction n_b; ``auc`` is the
    trapezoidal area over the grid span; ``stderr`` carries per-point
    standard errors for the random scheme and is None otherwise.
    """

    scheme: RankingScheme
    points: tuple[tuple[float, float], ...]
    auc: float
    stderr: tuple[float, ...] | None = None


@dataclass(frozen=True)
class EnsembleResult:
    """Per-run ranking-advantage ratios over a generated ensemble.

    rs0 = S_C / S_K - 1 and rs1 = S_C / S_R - 1, where S_x is the area
    under the n_b(n_c) curve for the contribution / capacity / range
    scheme. ``failures`` records (run index, reason) for excluded runs.
    """

    runs_requested: int
    run_ids: tuple[int, ...]
    rs0: tuple[float, ...]
    rs1: tuple[float, ...]
    failures: tuple[tuple[int, str], ...]
    p_value: float
    test_name: str

    def summary(self) -> dict:
        rs0 = list(self.rs0)
        rs1 = list(self.rs1)
        def _mean(xs):
            return float(statistics.fmean(xs)) if xs else float("nan")
        def _median(xs):
            return float(statistics.median(xs)) if xs else float("nan")
        def _frac_pos(xs):
            return sum(1 for x in xs if x > 0) / len(xs) if xs else float("nan")
        return {
            "runs_requested": self.runs_requested,
            "runs_used": len(rs0),
            "means": {"rs0": _mean(rs0), "rs1": _mean(rs1)},
            "medians": {"rs0": _median(rs0), "rs1": _median(rs1)},
            "frac_positive": {"rs0": _frac_pos(rs0), "rs1": _frac_pos(rs1)},
            "p_value": self.p_value,
            "test_name": self.test_name,
            "failures": len(self.failures),
        }


def rank_nodes(
    g: DirectedGraph,
    scheme: RankingScheme,
    estimates: ControlEstimates | None = None,
) -> list[int]:
    """Order all nodes under a scheme; ties always break by ascending id.

    Control-based schemes need ``estimates``; degree schemes rank ascending
    (low-degree first); the random scheme is a seeded uniform shuffle.
    """
    n = g.node_count
    kind = scheme.kind
    if kind in CONTROL_SCHEME_KINDS:
        if estimates is None:
            raise ValueError(f"scheme {kind} needs control estimates")
        if estimates.node_count != n:
            raise ValueError("estimates were computed for a different graph size")
        score = {
            "contribution-desc": estimates.contribution,
            "capacity-desc": estimates.capacity,
            "range-desc": estimates.control_range,
        }[kind]
        return sorted(range(n), key=lambda v: (-score[v], v))
    if kind == "indegree-asc":
        deg = g.in_degrees()
        return sorted(range(n), key=lambda v: (deg[v], v))
    if kind == "outdegree-asc":
        deg = g.out_degrees()
        return sorted(range(n), key=lambda v: (deg[v], v))
    order = list(range(n))
    random.Random(scheme.seed).shuffle(order)
    return order


def measured_driver_fraction(g: DirectedGraph) -> float:
    """n_d = max(N - |maximum matching|, 1) / N; matching size is invariant."""
    if g.node_count == 0:
        raise ValueError("empty graph has no driver fraction")
    m = maximum_matching(g, order_seed=0)
    return max(g.node_count - m.size, 1) / g.node_count


def default_grid(n_d: float, points: int = 20) -> tuple[float, ...]:
    """``points`` evenly spaced n_c values in (0, n_d]."""
    if points < 1:
        raise ValueError("points must be >= 1")
    return tuple(n_d * (j + 1) / points for j in range(points))


def _driver_count(n_c: float, n: int) -> int:
    # ceil with a tiny backoff so n_c values that are exact multiples of
    # 1/N survive float noise from grid construction
    return max(1, min(n, math.ceil(n_c * n - 1e-9)))


def nb_curve(
    g: DirectedGraph,
    order: list[int],
    grid,
    trials: int = 3,
    seed: int = 0,
    scheme: RankingScheme | None = None,
    jobs: int = 1,
) -> CurveResult:
    """Controllable fraction n_b at each grid n_c for one node order.

    For each n_c, the top ceil(n_c * N) nodes of ``order`` act as drivers.
    Grid values must lie in (0, n_d]; anything above the measured driver
    fraction is an error (beyond it the curve is trivially saturated).
    """
    n = g.node_count
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of all node ids")
    grid = tuple(float(x) for x in grid)
    if not grid:
        raise ValueError("grid must be non-empty")
    n_d = measured_driver_fraction(g)
    for x in grid:
        if not (0.0 < x <= n_d + 1e-9):
            raise ValueError(f"grid value {x} outside (0, n_d]; measured n_d = {n_d}")
    tasks = [
        (g, tuple(order[: _driver_count(x, n)]), trials, child_seeds(1, seed, i)[0])
        for i, x in enumerate(grid)
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            dims = list(pool.map(_dim_task, tasks))
    else:
        dims = [_dim_task(task) for task in tasks]
    points = tuple((x, nb) for x, nb in zip(grid, dims))
    auc = _curve_area(points)
    return CurveResult(
        scheme=scheme or RankingScheme("random", seed=0),
        points=points,
        auc=auc,
    )


def _dim_task(args) -> float:
    g, drivers, trials, seed = args
    return controllable_dim(g, drivers, trials=trials, seed=seed).n_b


def _curve_area(points) -> float:
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    if len(xs) == 1:
        return 0.0
    return float(np.trapezoid(ys, xs))


def scheme_curve(
    g: DirectedGraph,
    scheme: RankingScheme,
    grid,
    estimates: ControlEstimates | None = None,
    trials: int = 3,
    seed: int = 0,
    random_repeats: int = RANDOM_ORDER_REPEATS,
    jobs: int = 1,
) -> CurveResult:
    """Curve for a scheme; the random scheme averages several orders.

    Deterministic schemes delegate to :func:`nb_curve` directly. The random
    scheme draws ``random_repeats`` independent orders from the scheme seed,
    averages n_b pointwise, and reports the standard error per point.
    """
    if scheme.kind != "random":
        order = rank_nodes(g, scheme, estimates)
        return nb_curve(g, order, grid, trials=trials, seed=seed, scheme=scheme, jobs=jobs)
    grid = tuple(float(x) for x in grid)
    curves = []
    for rep in range(random_repeats):
        order = rank_nodes(g, RankingScheme("random", seed=child_seeds(1, scheme.seed, rep)[0]))
        curves.append(
            nb_curve(g, order, grid, trials=trials, seed=child_seeds(1, seed, rep)[0], jobs=jobs)
        )
    data = np.array([[nb for _, nb in c.points] for c in curves], dtype=float)
    mean = data.mean(axis=0)
    if data.shape[0] > 1:
        stderr = data.std(axis=0, ddof=1) / math.sqrt(data.shape[0])
    else:
        stderr = np.zeros(data.shape[1])
    points = tuple((x, float(m)) for x, m in zip(grid, mean))
    return CurveResult(
        scheme=scheme,
        points=points,
        auc=_curve_area(points),
        stderr=tuple(float(s) for s in stderr),
    )


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate for each ensemble run."""

    kind: str  # "er" or "sf"
    n: int
    l: int
    gamma: float = 2.5

    def __post_init__(self):
        if self.kind not in ("er", "sf"):
            raise ValueError(f"unknown generator kind {self.kind!r}")

    def build(self, seed: int) -> DirectedGraph:
        if self.kind == "er":
            return generate_erdos_renyi(self.n, self.l, seed)
        if self.kind == "sf":
            return generate_scale_free(self.n, self.l, seed, gamma=self.gamma)
        raise ValueError(f"unknown generator kind {self.kind!r}")


def _ensemble_run(args) -> tuple[int, str | None, float, float]:
    """One ensemble run; returns (run index, failure reason, rs0, rs1)."""
    spec, base_config, grid_points, trials, master_seed, run = args
    gen_seed, est_seed, dim_seed = child_seeds(3, master_seed, run)
    try:
        g = spec.build(gen_seed)
    except GenerationError as exc:
        return run, f"generation: {exc}", 0.0, 0.0
    cfg = replace(base_config, master_seed=est_seed)
    est = estimate(g, cfg)
    if not est.converged:
        return run, f"estimate did not converge within t_max={est.samples}", 0.0, 0.0
    grid = default_grid(measured_driver_fraction(g), grid_points)
    aucs = {}
    for si, kind in enumerate(CONTROL_SCHEME_KINDS):
        order = rank_nodes(g, RankingScheme(kind), est)
        curve = nb_curve(
            g, order, grid, trials=trials, seed=child_seeds(1, dim_seed, si)[0]
        )
        aucs[kind] = curve.auc
    rs0 = aucs["contribution-desc"] / aucs["capacity-desc"] - 1.0
    rs1 = aucs["contribution-desc"] / aucs["range-desc"] - 1.0
    return run, None, rs0, rs1


def ensemble_experiment(
    spec: GeneratorSpec,
    runs: int = 100,
    grid_points: int = 20,
    master_seed: int = 0,
    config: EstimatorConfig | None = None,
    trials: int = 3,
    use_wilcoxon: bool = False,
    jobs: int = 1,
) -> EnsembleResult:
    """Generate ``runs`` networks and compare control-scheme curve areas.

    Each run generates a fresh network, estimates control statistics,
    builds contribution/capacity/range curves on a shared grid, and records
    rs0 and rs1. Failed runs (generation failure or non-convergence) are
    excluded; more than 10% failures aborts. The p-value tests whether the
    rs0 median is above zero: a one-sided sign test by default, one-sided
    Wilcoxon signed-rank when ``use_wilcoxon`` is set.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    tasks = [
        (spec, config or EstimatorConfig(), grid_points, trials, master_seed, run)
        for run in range(runs)
    ]
    if jobs > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_ensemble_run, tasks))
    else:
        outcomes = [_ensemble_run(task) for task in tasks]
    outcomes.sort(key=lambda o: o[0])

    run_ids: list[int] = []
    rs0: list[float] = []
    rs1: list[float] = []
    failures: list[tuple[int, str]] = []
    for run, reason, a, b in outcomes:
        if reason is None:
            run_ids.append(run)
            rs0.append(a)
            rs1.append(b)
        else:
            failures.append((run, reason))
    if len(failures) > 0.1 * runs:
        detail = "; ".join(f"run {r}: {why}" for r, why in failures[:5])
        raise RuntimeError(
            f"{len(failures)}/{runs} ensemble runs failed (>10%): {detail}"
        )

    p_value, test_name = _median_above_zero_test(rs0, use_wilcoxon)
    return EnsembleResult(
        runs_requested=runs,
        run_ids=tuple(run_ids),
        rs0=tuple(rs0),
        rs1=tuple(rs1),
        failures=tuple(failures),
        p_value=p_value,
        test_name=test_name,
    )


def _median_above_zero_test(values, use_wilcoxon: bool) -> tuple[float, str]:
    if use_wilcoxon:
        nonzero = [v for v in values if v != 0]
        if not nonzero:
            return 1.0, "wilcoxon"
        res = scipy_stats.wilcoxon(nonzero, alternative="greater")
        return float(res.pvalue), "wilcoxon"
    nonzero = [v for v in values if v != 0]
    if not nonzero:
        return 1.0, "sign"
    wins = sum(1 for v in nonzero if v > 0)
    res = scipy_stats.binomtest(wins, len(nonzero), 0.5, alternative="greater")
    return float(res.pvalue), "sign"
