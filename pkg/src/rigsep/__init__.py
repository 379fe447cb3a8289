"""Balanced vertex separators on region intersection graphs.

Core objects: graphs with conformal vertex weights, region assignments
over a base graph and the intersection graphs they induce, string
graphs from exact polyline arrangements, randomized chop/shatter
separators with diameter certificates, spread/congestion linear
programs with their duality report, spectral baselines, and small
brute-force oracles backing the tests.
"""

from .graph import (
    Graph,
    MetricView,
    SubgraphView,
    balls_and_sphere,
    check_weights,
    complete_graph,
    connected_components,
    cycle_graph,
    dist_omega,
    dump_graph_json,
    graph_from_json_dict,
    graph_to_json_dict,
    grid_graph,
    induced_subgraph,
    l1_weight,
    load_graph_json,
    lp_weight,
    observed_spread,
    path_graph,
    shortest_path_tree,
    extract_path,
    spread,
    subdivision,
)
from .rig import (
    RegionAssignment,
    assignment_from_json_dict,
    assignment_to_json_dict,
    build_rig,
    rig_over_subdivision,
)
from .strings import (
    PolylineArrangement,
    arrangement_points,
    polylines_from_json,
    polylines_to_json,
    segments_intersect,
    string_graph_from_polylines,
)
from .partition import (
    ChoppingTree,
    PaddedPartitionSample,
    RandomSeparatorSample,
    balanced_separator,
    build_chopping_tree,
    chop_delta,
    cut_delta,
    padded_partition,
    random_separator,
    rounding_map_ball,
    rounding_map_coloring,
    shatter,
    sweep_cut,
    vertex_expansion_witnesses,
)
from .flows import (
    CongestionResult,
    CrossingReport,
    DualityReport,
    HFlow,
    MultiFlow,
    SpreadLPResult,
    check_duality,
    congestion_map,
    crossing_congestion,
    cspread_lp,
    integral_rounding,
    rig_flow_transfer,
    vcong_lp,
)
from .spectral import (
    LaplacianSpectrum,
    laplacian_matrix,
    laplacian_spectrum,
    spectral_bisection,
    spreading_constant,
)
from .oracles import (
    MinorWitness,
    careful_witness_violations,
    cspread_exact_small,
    has_careful_minor_exact,
    has_minor_exact,
    has_strict_minor_exact,
    min_balanced_separator_exact,
    validate_careful_witness,
    vertex_expansion_exact,
)
from .generators import GENERATOR_KINDS, Instance, generate
from .bench import ExperimentRecord, ScalingStudy, scaling_study, separate

__version__ = "0.1.0"

__all__ = [
    "Graph", "MetricView", "SubgraphView", "balls_and_sphere",
    "check_weights", "complete_graph", "connected_components",
    "cycle_graph", "dist_omega", "dump_graph_json", "graph_from_json_dict",
    "graph_to_json_dict", "grid_graph", "induced_subgraph", "l1_weight",
    "load_graph_json", "lp_weight", "observed_spread", "path_graph",
    "shortest_path_tree", "extract_path", "spread", "subdivision",
    "RegionAssignment", "assignment_from_json_dict",
    "assignment_to_json_dict", "build_rig", "rig_over_subdivision",
    "PolylineArrangement", "arrangement_points", "polylines_from_json",
    "polylines_to_json", "segments_intersect", "string_graph_from_polylines",
    "ChoppingTree", "PaddedPartitionSample", "RandomSeparatorSample",
    "balanced_separator", "build_chopping_tree", "chop_delta", "cut_delta",
    "padded_partition", "random_separator", "rounding_map_ball",
    "rounding_map_coloring", "shatter", "sweep_cut",
    "vertex_expansion_witnesses",
    "CongestionResult", "CrossingReport", "DualityReport", "HFlow",
    "MultiFlow", "SpreadLPResult", "check_duality", "congestion_map",
    "crossing_congestion", "cspread_lp", "integral_rounding",
    "rig_flow_transfer", "vcong_lp",
    "LaplacianSpectrum", "laplacian_matrix", "laplacian_spectrum",
    "spectral_bisection", "spreading_constant",
    "MinorWitness", "careful_witness_violations", "cspread_exact_small",
    "has_careful_minor_exact", "has_minor_exact", "has_strict_minor_exact",
    "min_balanced_separator_exact", "validate_careful_witness",
    "vertex_expansion_exact",
    "GENERATOR_KINDS", "Instance", "generate",
    "ExperimentRecord", "ScalingStudy", "scaling_study", "separate",
    "__version__",
]
