"""Exact top-k cosine search over the stored vectors.

Scores are plain dot products (vectors are unit-normalized). Results are
totally ordered by (score descending, chunk_id ascending); the tie-break
is precomputed as an integer rank per row so the sort never touches
strings.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import DimensionMismatch, EmptyIndex
from ..models import SearchFilter, SearchHit
from ..storage import DataDirectory
from .kernels import score_rows
from .store import read_index

UNIT_NORM_TOL = 1e-6


@dataclass(frozen=True)
class ChunkMeta:
    """Filterable attributes joined from the chunk/enrichment stores."""

    politician: str = ""
    party: str = ""
    topic: str = ""
    session_type: str = ""
    session_date: Optional[dt.date] = None


class SearchEngine:
    def __init__(self, matrix: np.ndarray, chunk_ids: list[str], meta: Optional[list[ChunkMeta]] = None):
        matrix = np.ascontiguousarray(matrix, dtype=np.float32)
        if matrix.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        if matrix.shape[0] != len(chunk_ids):
            raise ValueError("one chunk_id required per row")
        if meta is not None and len(meta) != len(chunk_ids):
            raise ValueError("one ChunkMeta required per row")
        self.matrix = matrix
        self.chunk_ids = list(chunk_ids)
        self.meta = meta if meta is not None else [ChunkMeta() for _ in chunk_ids]
        self.dim = matrix.shape[1] if matrix.size else 0
        # tie_rank[i] = position of chunk_ids[i] in ascending chunk_id order
        order = sorted(range(len(chunk_ids)), key=lambda i: self.chunk_ids[i])
        self.tie_rank = np.empty(len(chunk_ids), dtype=np.int64)
        for rank, row in enumerate(order):
            self.tie_rank[row] = rank

    def __len__(self) -> int:
        return len(self.chunk_ids)

    @classmethod
    def from_data_dir(cls, data_dir: DataDirectory | Path) -> "SearchEngine":
        dd = data_dir if isinstance(data_dir, DataDirectory) else DataDirectory(data_dir)
        matrix, chunk_ids = read_index(dd)

        chunks = {c.chunk_id: c for c in dd.load_chunks()}
        turns = {t.turn_id: t for t in dd.load_turns()}
        documents = {d.doc_id: d for d in dd.load_documents()}
        enrichments = {e.chunk_id: e for e in dd.load_enrichments()}

        meta = []
        for chunk_id in chunk_ids:
            chunk = chunks.get(chunk_id)
            turn = turns.get(chunk.turn_id) if chunk else None
            doc = documents.get(turn.doc_id) if turn else None
            enr = enrichments.get(chunk_id)
            meta.append(
                ChunkMeta(
                    politician=enr.politician if enr else (turn.speaker if turn else ""),
                    party=enr.party if enr else (turn.party if turn else ""),
                    topic=enr.topic if enr else "",
                    session_type=doc.session_type if doc else "",
                    session_date=doc.session_date if doc else None,
                )
            )
        return cls(matrix, chunk_ids, meta)

    def _filter_mask(self, flt: SearchFilter) -> np.ndarray:
        mask = np.ones(len(self.chunk_ids), dtype=bool)
        for i, m in enumerate(self.meta):
            if flt.politician is not None and m.politician != flt.politician:
                mask[i] = False
            elif flt.party is not None and m.party != flt.party:
                mask[i] = False
            elif flt.topic is not None and m.topic != flt.topic:
                mask[i] = False
            elif flt.session_type is not None and m.session_type != flt.session_type:
                mask[i] = False
            elif flt.date_from is not None and (m.session_date is None or m.session_date < flt.date_from):
                mask[i] = False
            elif flt.date_to is not None and (m.session_date is None or m.session_date > flt.date_to):
                mask[i] = False
        return mask

    def search(self, query_vector: np.ndarray, k: int, flt: Optional[SearchFilter] = None) -> list[SearchHit]:
        if len(self.chunk_ids) == 0:
            raise EmptyIndex()
        if k <= 0:
            raise ValueError("k must be positive")
        query = np.ascontiguousarray(query_vector, dtype=np.float32)
        if query.ndim != 1 or query.shape[0] != self.dim:
            raise DimensionMismatch(expected=self.dim, got=int(query.size))
        norm = float(np.linalg.norm(query.astype(np.float64)))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"query vector must be unit-normalized (norm={norm:.6g})")

        scores = score_rows(self.matrix, query)
        if flt is None or flt.is_empty():
            eligible = np.arange(len(self.chunk_ids))
        else:
            eligible = np.flatnonzero(self._filter_mask(flt))
        if eligible.size == 0:
            return []
        order = np.lexsort((self.tie_rank[eligible], -scores[eligible]))
        top = eligible[order[: min(k, eligible.size)]]
        return [
            SearchHit(chunk_id=self.chunk_ids[row], score=float(scores[row]), rank=rank + 1)
            for rank, row in enumerate(top)
        ]
