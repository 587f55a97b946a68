"""Structural controllability toolkit for directed networks.

Builds maximum matchings and minimum driver sets, samples stem/cycle
decompositions, estimates per-node control capacity / range / contribution,
measures controllable-subspace dimensions, and evaluates node-ranking
schemes on generated or loaded networks.
"""

from .cactus import (
    CactusSample,
    attach_cycles_max,
    attach_cycles_partition,
    decompose,
    sample_cactus,
)
from .graph import (
    DirectedGraph,
    GenerationError,
    NetworkStats,
    ParseError,
    degree_preserving_rewire,
    generate_erdos_renyi,
    generate_scale_free,
    load_edge_list,
    load_pajek,
    network_stats,
)
from .matching import (
    DriverSet,
    Matching,
    driver_set,
    maximum_matching,
    sample_matching,
)
from .metrics import (
    ContributionRow,
    ControlEstimates,
    EstimatorConfig,
    contribution_table,
    estimate,
)
from .ranking import (
    CONTROL_SCHEME_KINDS,
    SCHEME_KINDS,
    CurveResult,
    EnsembleResult,
    GeneratorSpec,
    RankingScheme,
    default_grid,
    ensemble_experiment,
    measured_driver_fraction,
    nb_curve,
    rank_nodes,
    scheme_curve,
)
from .subspace import (
    SubspaceResult,
    controllable_dim,
    exact_dim_oracle,
    reachable_set,
)

__version__ = "0.1.0"

__all__ = [
    "CONTROL_SCHEME_KINDS",
    "SCHEME_KINDS",
    "CactusSample",
    "ContributionRow",
    "ControlEstimates",
    "CurveResult",
    "DirectedGraph",
    "DriverSet",
    "EnsembleResult",
    "EstimatorConfig",
    "GenerationError",
    "GeneratorSpec",
    "Matching",
    "NetworkStats",
    "ParseError",
    "RankingScheme",
    "SubspaceResult",
    "attach_cycles_max",
    "attach_cycles_partition",
    "contribution_table",
    "controllable_dim",
    "decompose",
    "default_grid",
    "degree_preserving_rewire",
    "driver_set",
    "ensemble_experiment",
    "estimate",
    "exact_dim_oracle",
    "generate_erdos_renyi",
    "generate_scale_free",
    "load_edge_list",
    "load_pajek",
    "maximum_matching",
    "measured_driver_fraction",
    "nb_curve",
    "network_stats",
    "rank_nodes",
    "reachable_set",
    "sample_cactus",
    "sample_matching",
    "scheme_curve",
    "__version__",
]
