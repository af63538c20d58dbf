"""Spectral degeneracy of graphs: exact decisions, certificates, bounds, reductions."""

__version__ = "0.1.0"

from .decider import (  # noqa: E402
    Certificate,
    DecisionResult,
    approximate_sdeg,
    decide,
    make_certificate,
    spectral_degeneracy_number,
    verify_certificate,
)
from .graph import Graph, parse_graph, read_graph, write_graph  # noqa: E402

__all__ = [
    "Certificate",
    "DecisionResult",
    "Graph",
    "approximate_sdeg",
    "decide",
    "make_certificate",
    "parse_graph",
    "read_graph",
    "spectral_degeneracy_number",
    "verify_certificate",
    "write_graph",
]
