from .index import (
    RetrievalConfig,
    ScoredSentence,
    SentenceIndex,
    bm25_score,
    build_index,
    index_terms,
    query_terms,
    retrieve_top_k,
)
from .io import load_index, save_index

__all__ = [
    "RetrievalConfig",
    "ScoredSentence",
    "SentenceIndex",
    "bm25_score",
    "build_index",
    "index_terms",
    "load_index",
    "query_terms",
    "retrieve_top_k",
    "save_index",
]
