"""Indexing pass: embed each enriched chunk's retrieval text and write the
vector store."""
from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import DimensionMismatch
from ..prompts import PROMPT_VERSION
from ..storage import EMBEDDINGS_FILE, MANIFEST_FILE, DataDirectory
from .embedding import normalize_vector
from .store import read_index, write_index

EMBED_BATCH_SIZE = 64


def index_corpus(
    data_dir: DataDirectory | Path,
    backend,
    embed_source: str = "full_summary",
    prompt_version: str = PROMPT_VERSION,
    batch_size: int = EMBED_BATCH_SIZE,
    dim_hint: Optional[int] = None,
) -> dict:
    """Embed retrieval texts for enriched chunks and write the index.

    Chunks already present for the same embedding model are kept without a
    backend call. The merged index replaces the old one atomically, so a
    failed run never clobbers a complete previous index.
    """
    dd = data_dir if isinstance(data_dir, DataDirectory) else DataDirectory(data_dir)
    chunks = {c.chunk_id: c for c in dd.load_chunks()}
    enrichments = {
        e.chunk_id: e for e in dd.load_enrichments() if e.prompt_version == prompt_version
    }

    existing_ids: list[str] = []
    existing_matrix = None
    dim = dim_hint
    if dd.has(EMBEDDINGS_FILE):
        manifest = dd.load_manifest() if dd.has(MANIFEST_FILE) else {}
        if manifest.get("embedding_model", "") == backend.model:
            existing_matrix, existing_ids = read_index(dd)
            if existing_matrix.size:
                dim = existing_matrix.shape[1]

    already = set(existing_ids)
    todo = [cid for cid in sorted(enrichments) if cid in chunks and cid not in already]
    skipped = sum(1 for cid in existing_ids if cid in enrichments)

    new_vectors: list[np.ndarray] = []
    for start in range(0, len(todo), batch_size):
        batch_ids = todo[start : start + batch_size]
        if embed_source == "raw_chunk":
            texts = [chunks[cid].text for cid in batch_ids]
        else:
            texts = [enrichments[cid].full_summary for cid in batch_ids]
        raw_vectors = backend.embed(texts)
        for cid, raw in zip(batch_ids, raw_vectors):
            raw = np.asarray(raw, dtype=np.float64)
            if dim is None:
                dim = int(raw.shape[0])
            if raw.shape[0] != dim:
                raise DimensionMismatch(expected=dim, got=int(raw.shape[0]))
            new_vectors.append(normalize_vector(raw, expected_dim=dim))

    if existing_matrix is not None and existing_matrix.size:
        all_ids = existing_ids + todo
        parts = [existing_matrix]
        if new_vectors:
            parts.append(np.vstack(new_vectors))
        matrix = np.vstack(parts)
    else:
        all_ids = todo
        matrix = (
            np.vstack(new_vectors)
            if new_vectors
            else np.zeros((0, dim or 0), dtype=np.float32)
        )

    write_index(dd, matrix, all_ids)
    dd.write_manifest(embedding_model=backend.model, dim=int(dim or 0))
    return {"indexed": len(todo), "skipped": skipped}
