"""Exact Lie-series computations for Novikov algebras and Leavitt path algebras of graphs."""

from .algebra import (
    StructureAlgebra,
    derived_series,
    gl_algebra,
    is_lie_nilpotent,
    is_lie_solvable,
    lie_lower_central_series,
    verify_novikov,
)
from .graph import Graph, classify, decompose, parse_graph, serialize_graph
from .linalg import GF, QQ, Field, Subspace, rref
from .novikov import class_of, make_truncated_derivation_novikov, run_checks

__all__ = [
    "Field",
    "GF",
    "QQ",
    "Subspace",
    "rref",
    "StructureAlgebra",
    "gl_algebra",
    "derived_series",
    "lie_lower_central_series",
    "is_lie_solvable",
    "is_lie_nilpotent",
    "verify_novikov",
    "make_truncated_derivation_novikov",
    "class_of",
    "run_checks",
    "Graph",
    "parse_graph",
    "serialize_graph",
    "classify",
    "decompose",
]
