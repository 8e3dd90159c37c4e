"""Influence centrality of network nodes against zero-anchored holdouts.

A node's influence is the total voltage it induces when held at one while a
fixed set of nodes is grounded; conductances weigh how strongly neighbors
average each other.  The package computes it three ways: a direct linear
solve (the ground truth), an exact two-phase message sweep on trees, and an
iterative message-passing scheme for graphs with cycles, plus placement
search, random-graph experiments and a CLI (``hic``).
"""

from .errors import (
    DimensionMismatchError,
    DisconnectedGraphError,
    EmptySourceSetError,
    EmptyStubbornSetError,
    GraphFormatError,
    HicError,
    InvalidSpecError,
    MissingInboundError,
    NoConvergenceError,
    NotATreeError,
    SingularSystemError,
    TooFewStubbornError,
    UnknownNodeError,
)
from .exact import (
    HicResult,
    StochasticSystem,
    StoppingReason,
    VoltageProfile,
    build_system,
    dynamics_step,
    harmonic_extension,
    hic_all_exact,
    hic_exact,
    voltage_rescale,
)
from .experiments import (
    ERDOS_RENYI,
    LINE,
    RANDOM_TREE,
    STAR,
    WATTS_STROGATZ,
    ErrorReport,
    GeneratorSpec,
    compare_run,
    degree_centrality,
    eigenvector_centrality,
    generate,
    mean_deviation_error,
    mean_rank_error,
)
from .general_mpa import (
    ComputationTree,
    IterativeState,
    MpaTimeline,
    StoppingRule,
    build_computation_tree,
    hic_on_computation_tree,
    initial_state,
    mpa_step,
    run_general_mpa,
)
from .graph import (
    INFINITE_RESISTANCE,
    StubbornConfig,
    SubtreeComponent,
    SubtreePartition,
    ValidationReport,
    WeightedGraph,
    diameter,
    dump_graph,
    effective_resistance,
    induced_subgraph,
    is_connected,
    is_tree,
    load_graph,
    tree_partition,
    validate,
)
from .tree_mpa import (
    DirectedMessage,
    MessageState,
    MpaStats,
    candidate_set,
    init_leaf_messages,
    message_update,
    osap_tree,
    run_message_sweep,
    run_tree_mpa,
    split_stubborn,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatchError", "DisconnectedGraphError", "EmptySourceSetError",
    "EmptyStubbornSetError", "GraphFormatError", "HicError", "InvalidSpecError",
    "MissingInboundError", "NoConvergenceError", "NotATreeError",
    "SingularSystemError", "TooFewStubbornError", "UnknownNodeError",
    "HicResult", "StochasticSystem", "StoppingReason", "VoltageProfile",
    "build_system", "dynamics_step", "harmonic_extension", "hic_all_exact",
    "hic_exact", "voltage_rescale",
    "ERDOS_RENYI", "LINE", "RANDOM_TREE", "STAR", "WATTS_STROGATZ",
    "ErrorReport", "GeneratorSpec", "compare_run", "degree_centrality",
    "eigenvector_centrality", "generate", "mean_deviation_error",
    "mean_rank_error",
    "ComputationTree", "IterativeState", "MpaTimeline", "StoppingRule",
    "build_computation_tree", "hic_on_computation_tree", "initial_state",
    "mpa_step", "run_general_mpa",
    "INFINITE_RESISTANCE", "StubbornConfig", "SubtreeComponent",
    "SubtreePartition", "ValidationReport", "WeightedGraph", "diameter",
    "dump_graph", "effective_resistance", "induced_subgraph", "is_connected",
    "is_tree", "load_graph", "tree_partition", "validate",
    "DirectedMessage", "MessageState", "MpaStats", "candidate_set",
    "init_leaf_messages", "message_update", "osap_tree", "run_message_sweep",
    "run_tree_mpa", "split_stubborn",
]
