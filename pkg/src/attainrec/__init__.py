"""Attainment ratings, property-graph recommendation queries, and an SVD++
recommender for video-game achievement data."""

from .attainment import (
    AchievementTable,
    CompletionRates,
    annotate_graph,
    attainment_score,
    completion_rates,
)
from .graph import EdgeKind, PropertyGraph, VertexKind
from .querylang import QueryAst, parse, unparse, validate
from .queryexec import evaluate, run_query

__all__ = [
    "AchievementTable",
    "CompletionRates",
    "EdgeKind",
    "PropertyGraph",
    "QueryAst",
    "VertexKind",
    "annotate_graph",
    "attainment_score",
    "completion_rates",
    "evaluate",
    "parse",
    "run_query",
    "unparse",
    "validate",
]
