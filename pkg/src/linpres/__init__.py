"""Exact linear algebra over small finite fields for matrix-space preserver problems."""

from .field import FieldTable, GF2, make_field, UnsupportedFieldError
from .subspace import Subspace, span, join, meet, trace_orthogonal, rank_profile
from .action import FrobeniusMap, are_equivalent, enumerate_GL, enumerate_frobenius
from .classify import Kind, classify_singular, census_5dim_singular, census_inside
from .preserver import SubspaceLinearMap, frobenius_extension, search_embeddings

__version__ = "0.1.0"

__all__ = [
    "FieldTable", "GF2", "make_field", "UnsupportedFieldError",
    "Subspace", "span", "join", "meet", "trace_orthogonal", "rank_profile",
    "FrobeniusMap", "are_equivalent", "enumerate_GL", "enumerate_frobenius",
    "Kind", "classify_singular", "census_5dim_singular", "census_inside",
    "SubspaceLinearMap", "frobenius_extension", "search_embeddings",
]
