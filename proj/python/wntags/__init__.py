"""Ontology-backed image annotation and retrieval."""

from ._wntags import (
    Ontology,
    Repository,
    Sense,
    SimilarityTable,
    WntagsError,
    curve_csv,
    load_repository,
    load_similarity_pairs,
    load_simple_graph,
    load_wordnet,
    lookup_senses,
    neighborhood,
    node_distance,
    normalize_lemma,
    parse_simple_graph,
    run_benchmark,
    search,
    sense,
    sense_key,
    similarity,
    synthetic_corpus,
)

__all__ = [
    "Ontology",
    "Repository",
    "Sense",
    "SimilarityTable",
    "WntagsError",
    "curve_csv",
    "load_repository",
    "load_similarity_pairs",
    "load_simple_graph",
    "load_wordnet",
    "lookup_senses",
    "neighborhood",
    "node_distance",
    "normalize_lemma",
    "parse_simple_graph",
    "run_benchmark",
    "search",
    "sense",
    "sense_key",
    "similarity",
    "synthetic_corpus",
]
