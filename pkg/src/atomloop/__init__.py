"""Header-class atom computation and forwarding-loop detection.

The engine maintains the uncovered combinations canonically representing the
header classes of a rule collection under incremental rule addition, and
uses them to check one forwarding graph per class for directed cycles.
"""

from .atoms import (
    InternalInvariantError,
    OverlapMetrics,
    add,
    basic_add,
    compute_uc,
    init_store,
    overlap_metrics,
    weak_completeness_check,
)
from .formats import (
    InstanceError,
    dump_instance,
    instance_from_data,
    instance_to_data,
    load_instance,
    report_schema,
)
from .generators import (
    FIG2_GEOMETRY,
    fig2_instance,
    gen_fig2,
    gen_hsa_hard,
    gen_random_instance,
    gen_random_rules,
    gen_veriflow_hard,
)
from .network import (
    Action,
    ForwardingRule,
    LoopRecord,
    LoopReport,
    NetworkInstance,
    build_rule_index,
    detect_loops,
    forwarding_graph,
    has_cycle,
    scan_loops,
    witness_header,
)
from .oracle import HEADER_BITS_CAP, oracle_classes, oracle_loops
from .setrep import (
    Geometry,
    MultiRange,
    ParseError,
    Wildcard,
    canonical_key,
    cardinality,
    contains_header,
    format_header,
    format_ruleset,
    full_set,
    intersect,
    is_subset,
    iter_headers,
    parse_ruleset,
)
from .store import Combination, CombinationStore

__version__ = "0.1.0"

__all__ = [
    "Action",
    "Combination",
    "CombinationStore",
    "FIG2_GEOMETRY",
    "ForwardingRule",
    "Geometry",
    "HEADER_BITS_CAP",
    "InstanceError",
    "InternalInvariantError",
    "LoopRecord",
    "LoopReport",
    "MultiRange",
    "NetworkInstance",
    "OverlapMetrics",
    "ParseError",
    "Wildcard",
    "add",
    "basic_add",
    "build_rule_index",
    "canonical_key",
    "cardinality",
    "compute_uc",
    "contains_header",
    "detect_loops",
    "dump_instance",
    "fig2_instance",
    "format_header",
    "format_ruleset",
    "forwarding_graph",
    "full_set",
    "gen_fig2",
    "gen_hsa_hard",
    "gen_random_instance",
    "gen_random_rules",
    "gen_veriflow_hard",
    "has_cycle",
    "init_store",
    "instance_from_data",
    "instance_to_data",
    "intersect",
    "is_subset",
    "iter_headers",
    "load_instance",
    "oracle_classes",
    "oracle_loops",
    "overlap_metrics",
    "parse_ruleset",
    "report_schema",
    "scan_loops",
    "weak_completeness_check",
    "witness_header",
]
