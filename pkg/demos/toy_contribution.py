"""Walk through every concept on a 3-node toy network.

The graph: node 0 is isolated, and there is a single edge 1 -> 2. The
matching is unique, so capacity and range come out exactly: node 1 always
drives itself and node 2 (K=1, R=2/3), node 0 always drives only itself
(K=1, R=1/3), node 2 is never a driver. Run:

    python3 demos/toy_contribution.py
"""

from netctrl import (
    DirectedGraph,
    EstimatorConfig,
    RankingScheme,
    contribution_table,
    controllable_dim,
    driver_set,
    estimate,
    nb_curve,
    rank_nodes,
    sample_cactus,
    sample_matching,
)

g = DirectedGraph.from_edges(3, [(1, 2)])
print("graph: N=%d edges=%s" % (g.node_count, list(g.edges)))

m = sample_matching(g, seed=0)
d = driver_set(g, m, tie_seed=0)
print("matching size:", m.size)
print("drivers:", list(d.drivers), " n_d = %.3f" % d.n_d_fraction)

sample = sample_cactus(g, m, d, seed=0)
print("stems:", sample.stems)
print("territories:", sample.territories())

est = estimate(g, EstimatorConfig(master_seed=0))
print("\nconverged after %d samples" % est.samples)
print("node   K      R      C")
for row in contribution_table(est):
    print("%4d  %.3f  %.3f  %.3f" % (row.node, row.k, row.r, row.c))

order = rank_nodes(g, RankingScheme("contribution-desc"), est)
print("\ncontribution ranking:", order, "(node 1 first: it controls itself and node 2)")

# controllable fraction when driving the top-1 and top-2 ranked nodes
curve = nb_curve(g, order, [1 / 3, 2 / 3], seed=0)
for (x, y) in curve.points:
    print("n_c = %.3f -> n_b = %.3f" % (x, y))

# the same dimensions, driver set by driver set
print("dim from {1}:", controllable_dim(g, [1]).n_b_abs, "of 3")
print("dim from {0}:", controllable_dim(g, [0]).n_b_abs, "of 3")
