"""Maximum-weight bipartite b-matching toolkit.

Three solvers that provably return the same matching: a serial greedy
scan, a round-based parallel pour ("b-suitor" style), and a
pivot-partitioned warm-start search that skips per-ad sorting when a
good threshold estimate is available.  Plus pluggable pivot predictors,
an exact small-instance oracle, deterministic instance generators, and
text serialization for instances, matchings, thresholds, and
predictions.
"""

from .graph import (
    BELOW_ALL,
    BipartiteInstance,
    CapacityViolation,
    EdgeKey,
    Matching,
    build_instance,
    canonical_edge_compare,
    canonical_key,
    canonical_sorted_adjacency,
    default_capacities,
    global_sorted_edges,
    verify_feasible,
)
from .greedy import ThresholdVector, solve_serial_greedy, thresholds_from_matching
from .bsuitor import BSuitorState, extract_thresholds, solve_bsuitor, worker_schedule
from .pivot import (
    PartitionedNeighbors,
    PivotState,
    fine_tune,
    initial_solution,
    partition_by_pivot,
    solve_pivot,
)
from .predictors import (
    PivotPrediction,
    file_predictor,
    oracle_predictor,
    quantile_predictor,
    read_thresholds,
    warmstart_predictor,
    write_pivots,
    write_thresholds,
)
from .exact import ExactResult, SearchLimits, solve_exact
from .instances import (
    CapacityRule,
    DegreeSpec,
    GeneratorConfig,
    WeightSpec,
    generate,
    instance_digest,
    instance_from_text,
    instance_to_text,
    instances_equal,
    perturb,
    preset_instance,
    read_instance,
    write_instance,
)
from .report import RunReport, append_report
from . import errors

__all__ = [
    "BELOW_ALL",
    "BipartiteInstance",
    "BSuitorState",
    "CapacityRule",
    "CapacityViolation",
    "DegreeSpec",
    "EdgeKey",
    "ExactResult",
    "GeneratorConfig",
    "Matching",
    "PartitionedNeighbors",
    "PivotPrediction",
    "PivotState",
    "RunReport",
    "SearchLimits",
    "ThresholdVector",
    "WeightSpec",
    "append_report",
    "build_instance",
    "canonical_edge_compare",
    "canonical_key",
    "canonical_sorted_adjacency",
    "default_capacities",
    "errors",
    "extract_thresholds",
    "file_predictor",
    "fine_tune",
    "generate",
    "global_sorted_edges",
    "initial_solution",
    "instance_digest",
    "instance_from_text",
    "instance_to_text",
    "instances_equal",
    "oracle_predictor",
    "partition_by_pivot",
    "perturb",
    "preset_instance",
    "quantile_predictor",
    "read_instance",
    "read_thresholds",
    "solve_bsuitor",
    "solve_exact",
    "solve_pivot",
    "solve_serial_greedy",
    "thresholds_from_matching",
    "verify_feasible",
    "warmstart_predictor",
    "worker_schedule",
    "write_instance",
    "write_pivots",
    "write_thresholds",
]
