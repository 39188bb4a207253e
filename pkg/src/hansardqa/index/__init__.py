"""Exact cosine-similarity vector index: binary store, scoring kernels,
search engine, and the corpus indexing pass."""

from .build import index_corpus
from .embedding import embed_text
from .engine import ChunkMeta, SearchEngine
from .kernels import KERNEL_NAME, NUMBA_AVAILABLE, score_rows
from .store import read_index, write_index

__all__ = [
    "ChunkMeta",
    "SearchEngine",
    "embed_text",
    "index_corpus",
    "read_index",
    "write_index",
    "score_rows",
    "KERNEL_NAME",
    "NUMBA_AVAILABLE",
]
