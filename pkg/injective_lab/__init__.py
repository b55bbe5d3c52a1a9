"""
Injective coloring lab for sparse graphs.

Structure invariants, exact solvers, constructive list coloring, the
reducible-configuration engine, discharging audits and seeded instance
generators, driven from ``injective_lab.cli``.
"""

from .configurations import TheoremClass, check_hypotheses
from .errors import (
    AuditFailure,
    EmbeddingError,
    GenerationError,
    GraphFormatError,
    HypothesisError,
    InjectiveLabError,
    PreconditionError,
    SolverAborted,
    TheoremViolation,
)
from .graph_structure import Graph, PlaneEmbedding, format_graph, mad_exact, parse_graph

__version__ = "0.1.0"

__all__ = [
    "AuditFailure",
    "EmbeddingError",
    "GenerationError",
    "Graph",
    "GraphFormatError",
    "HypothesisError",
    "InjectiveLabError",
    "PlaneEmbedding",
    "PreconditionError",
    "SolverAborted",
    "TheoremClass",
    "TheoremViolation",
    "check_hypotheses",
    "format_graph",
    "mad_exact",
    "parse_graph",
]
