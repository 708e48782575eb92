"""Exact solvers for network construction scheduling.

Given a network whose edges are built one at a time at unit speed, choose
the build order minimizing an objective over the times at which designated
vertex pairs first become connected: the weighted sum of connection times,
or their maximum lateness against due dates.  Two exact backends are
provided (a subtree dynamic program for trees, and a shortest-path-closure
enumeration for few pairs on general networks) plus brute-force oracles,
instance generators, and a command-line interface.
"""

from .chains import Chain, DensityBlock, Job, density_decomposition, merge_two_chains, rho_factor
from .errors import (
    GuardExceededError,
    InstanceFormatError,
    InvalidInstanceError,
    NetconError,
    SequenceError,
    UnsupportedInstanceError,
)
from .evaluator import (
    BuildSequence,
    ConnectionReport,
    Verdict,
    evaluate_sequence,
    format_report,
    validate_sequence,
)
from .metric_solver import (
    ForestEvaluation,
    MetricClosure,
    RForest,
    build_metric_closure,
    enumerate_candidate_forests,
    evaluate_rforest,
    extract_path,
    project_to_graph,
    solve_fixed_r,
    solve_fixed_r_detailed,
)
from .model import (
    Instance,
    Network,
    Objective,
    OlaInput,
    RelevantPair,
    generate,
    parse_instance,
    parse_ola_input,
    reduce_ola,
    write_instance,
    write_ola_input,
)
from .oracle import interleaving_oracle, permutation_oracle, subset_dp
from .tree_solver import (
    SubtreeCatalog,
    SubtreeRecord,
    crossing_weight,
    enumerate_subtrees,
    merge_for_edge,
    pair_weight_tables,
    solve_tree,
)

__version__ = "0.1.0"

__all__ = [
    "BuildSequence",
    "Chain",
    "ConnectionReport",
    "DensityBlock",
    "ForestEvaluation",
    "GuardExceededError",
    "Instance",
    "InstanceFormatError",
    "InvalidInstanceError",
    "Job",
    "MetricClosure",
    "NetconError",
    "Network",
    "Objective",
    "OlaInput",
    "RForest",
    "RelevantPair",
    "SequenceError",
    "SubtreeCatalog",
    "SubtreeRecord",
    "UnsupportedInstanceError",
    "Verdict",
    "build_metric_closure",
    "crossing_weight",
    "density_decomposition",
    "enumerate_candidate_forests",
    "enumerate_subtrees",
    "evaluate_rforest",
    "evaluate_sequence",
    "extract_path",
    "format_report",
    "generate",
    "interleaving_oracle",
    "merge_for_edge",
    "merge_two_chains",
    "pair_weight_tables",
    "parse_instance",
    "parse_ola_input",
    "permutation_oracle",
    "project_to_graph",
    "reduce_ola",
    "rho_factor",
    "solve_fixed_r",
    "solve_fixed_r_detailed",
    "solve_tree",
    "subset_dp",
    "validate_sequence",
    "write_instance",
    "write_ola_input",
]
