"""Is contribution-ranking reliably better than its own factors?

Generates an ensemble of Erdos-Renyi networks and compares the area under
the n_b(n_c) curve when ranking by contribution (S_C) against ranking by
capacity (S_K) and by range (S_R):

    rs0 = S_C / S_K - 1      rs1 = S_C / S_R - 1

Positive values mean contribution-ranked drivers control more of the
network for the same budget. A sign test asks whether the median rs0 is
above zero. 30 runs keep the demo quick; pass a run count to change that.

    python3 demos/ensemble_study.py [runs]
"""

import sys

import numpy as np

from netctrl import GeneratorSpec, ensemble_experiment

runs = int(sys.argv[1]) if len(sys.argv) > 1 else 30

spec = GeneratorSpec("er", 200, 300)
print("ensemble: %s(%d, %d), %d runs" % (spec.kind, spec.n, spec.l, runs))
result = ensemble_experiment(spec, runs=runs, grid_points=20, master_seed=0, trials=3)

rs0 = np.array(result.rs0)
rs1 = np.array(result.rs1)
print("\n        mean     median   frac>0")
print("rs0  %8.4f  %8.4f  %6.2f" % (rs0.mean(), np.median(rs0), (rs0 > 0).mean()))
print("rs1  %8.4f  %8.4f  %6.2f" % (rs1.mean(), np.median(rs1), (rs1 > 0).mean()))
print("\nsign test for median(rs0) > 0: p = %.3g" % result.p_value)
if result.failures:
    print("failed runs:", result.failures)
