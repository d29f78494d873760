"""Attractors, signed interaction graphs and negative feedback circuits
of asynchronous automata networks on products of finite integer intervals."""

from .attractors import (
    Attractor,
    AttractorSet,
    attractors,
    fixed_points,
    strongly_connected_components,
)
from .circuits import (
    SignedCircuit,
    elementary_circuits,
    has_circuit,
    has_negative_circuit,
    has_positive_circuit,
    iter_elementary_circuits,
)
from .dotexport import export_dot
from .dynamics import (
    ASYNC,
    SYNC,
    UNITARY,
    TransitionGraph,
    build_stg,
    is_trap_domain,
    path_exists,
    shortest_path,
)
from .errors import (
    ContractError,
    DomainError,
    NegcircError,
    NetworkFileError,
    RangeViolation,
    RuleSyntaxError,
    RuleTypeError,
)
from .interaction import (
    SignedDigraph,
    dynamic_local_ig,
    global_ig,
    graph_union,
    is_subgraph,
    local_ig,
    unitary_ig,
)
from .model import NetworkMap, StateSpace
from .netfile import parse_network_file, parse_space_spec, serialize_network
from .rules import compile_network, parse_rule
from .sweep import (
    SweepSummary,
    enumerate_networks,
    replay_record,
    sample_networks,
    sweep,
)
from .verifier import ALL_CHECKS, CORE_CHECKS, AnalysisReport, check_instance
from .witness import (
    WitnessTrace,
    extract_negative_circuit,
    signed_influence_path,
    verify_witness,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_CHECKS",
    "ASYNC",
    "AnalysisReport",
    "Attractor",
    "AttractorSet",
    "CORE_CHECKS",
    "ContractError",
    "DomainError",
    "NegcircError",
    "NetworkFileError",
    "NetworkMap",
    "RangeViolation",
    "RuleSyntaxError",
    "RuleTypeError",
    "SYNC",
    "SignedCircuit",
    "SignedDigraph",
    "StateSpace",
    "SweepSummary",
    "TransitionGraph",
    "UNITARY",
    "WitnessTrace",
    "attractors",
    "build_stg",
    "check_instance",
    "compile_network",
    "dynamic_local_ig",
    "elementary_circuits",
    "enumerate_networks",
    "export_dot",
    "extract_negative_circuit",
    "fixed_points",
    "global_ig",
    "graph_union",
    "has_circuit",
    "has_negative_circuit",
    "has_positive_circuit",
    "is_subgraph",
    "is_trap_domain",
    "iter_elementary_circuits",
    "local_ig",
    "parse_network_file",
    "parse_rule",
    "parse_space_spec",
    "path_exists",
    "replay_record",
    "sample_networks",
    "serialize_network",
    "shortest_path",
    "signed_influence_path",
    "strongly_connected_components",
    "sweep",
    "unitary_ig",
    "verify_witness",
]
