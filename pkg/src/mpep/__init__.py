"""Multipath entanglement purification in random quantum networks."""
from .quantum import (
    PurificationResult,
    PurificationWindow,
    concurrence,
    is_purification_useful,
    path_probability,
    purify,
    swap_chain,
    swap_pair,
    useful_window,
    werner_parameter,
    window_lower_limit,
    window_upper_limit,
)
from .stats import (
    CriteriaConfig,
    DecisionTable,
    PathFidelityPdf,
    PathProbabilityPdf,
    QuadratureError,
    UniformEdgeDistribution,
    average_entangled_path_length,
    criterion_availability,
    criterion_fidelity,
    decision_tables,
    mean_path_fidelity,
    mean_path_probability,
    std_path_fidelity,
    std_path_probability,
)
from .network import (
    NetworkPath,
    QuantumNetwork,
    find_mad_paths,
    generate_random_network,
    nine_node_example,
    shortest_graph_path,
)
from .simulator import SimulationConfig, SimulationReport, run_campaign

__version__ = "0.1.0"
