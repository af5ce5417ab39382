"""Exact and Monte-Carlo analysis of how often minimal mesh routes confront fault rings."""

from faultring.faults import (
    ArbitraryFault,
    Classification,
    FaultComplex,
    FaultSpec,
    Finding,
    OverlapFault,
    RectFault,
    ValidationReport,
    build_complex,
    classify,
    expand_rectangular,
    fault_nodes_of,
    ring_of,
    validate_complex,
)
from faultring.mesh import (
    Box,
    Coord,
    MeshShape,
    bounding_box,
    delta,
    is_connected,
    link_count_direct,
    link_count_formula,
    neighbors,
)
from faultring.montecarlo import (
    McComparison,
    McConfig,
    McEstimate,
    compare_with_exact,
    estimate_p_hit,
    sample_minimal_path,
)
from faultring.paths import (
    PathEnumerationLimit,
    aligned_count,
    avoiding_brute,
    avoiding_det,
    avoiding_dp,
    multinomial,
    path_count,
    restriction_points,
)
from faultring.reference import REFERENCE_ROWS, ReferenceRow, reference_row
from faultring.reliability import (
    EngineChoice,
    EngineMismatch,
    ReliabilityResult,
    compute_reliability,
    format_probability,
    miss_paths,
    select_engine,
    total_paths,
)
from faultring.scenarios import (
    AnalysisOptions,
    McOptions,
    ScenarioConfig,
    ScenarioError,
    parse_scenario,
    serialize_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisOptions",
    "ArbitraryFault",
    "Box",
    "Classification",
    "Coord",
    "EngineChoice",
    "EngineMismatch",
    "FaultComplex",
    "FaultSpec",
    "Finding",
    "McComparison",
    "McConfig",
    "McEstimate",
    "McOptions",
    "MeshShape",
    "OverlapFault",
    "PathEnumerationLimit",
    "REFERENCE_ROWS",
    "RectFault",
    "ReferenceRow",
    "ReliabilityResult",
    "ScenarioConfig",
    "ScenarioError",
    "ValidationReport",
    "aligned_count",
    "avoiding_brute",
    "avoiding_det",
    "avoiding_dp",
    "bounding_box",
    "build_complex",
    "classify",
    "compare_with_exact",
    "compute_reliability",
    "delta",
    "estimate_p_hit",
    "expand_rectangular",
    "fault_nodes_of",
    "format_probability",
    "is_connected",
    "link_count_direct",
    "link_count_formula",
    "miss_paths",
    "multinomial",
    "neighbors",
    "parse_scenario",
    "path_count",
    "reference_row",
    "restriction_points",
    "ring_of",
    "sample_minimal_path",
    "select_engine",
    "serialize_scenario",
    "total_paths",
    "validate_complex",
]
