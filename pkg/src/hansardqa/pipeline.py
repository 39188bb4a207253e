"""Staged query interactions over the built corpus.

Stage 1 (ask) returns ranked one-line summaries under a character budget
so the result always fits a generation context. Stage 2 (respond)
generates, per source chunk, a response grounded in exactly that chunk's
material. get_source exposes the full provenance trail for the UI.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .backends import build_embedding_backend, build_generation_backend
from .config import AppConfig
from .errors import EmptyBackendResponse, EmptyIndex, EmptyQuery, StoreIntegrityError, UnknownChunk
from .index import SearchEngine, embed_text
from .models import (
    Chunk,
    SearchFilter,
    SessionDocument,
    SpeakerTurn,
    StageOneHit,
    StageOneResult,
    StageTwoResponse,
)
from .prompts import PROMPT_VERSION, build_response_prompt
from .storage import (
    CHUNKS_FILE,
    DOCUMENTS_FILE,
    EMBEDDINGS_FILE,
    MANIFEST_FILE,
    TURNS_FILE,
    DataDirectory,
)


@dataclass(frozen=True)
class SourceBundle:
    chunk: Chunk
    turn: SpeakerTurn
    document: SessionDocument

    def to_dict(self) -> dict:
        return {
            "chunk": self.chunk.to_dict(),
            "turn": self.turn.to_dict(),
            "document": self.document.to_dict(),
        }


class QueryEngine:
    def __init__(
        self,
        documents: dict[str, SessionDocument],
        turns: dict[str, SpeakerTurn],
        chunks: dict[str, Chunk],
        enrichments: dict,
        engine: Optional[SearchEngine],
        embedding_backend,
        generation_backend,
        config: AppConfig,
    ):
        self.documents = documents
        self.turns = turns
        self.chunks = chunks
        self.enrichments = enrichments
        self.engine = engine
        self.embedding_backend = embedding_backend
        self.generation_backend = generation_backend
        self.config = config

    @classmethod
    def from_data_dir(
        cls,
        data_dir: DataDirectory | Path,
        config: AppConfig,
        embedding_backend=None,
        generation_backend=None,
        prompt_version: str = PROMPT_VERSION,
    ) -> "QueryEngine":
        dd = data_dir if isinstance(data_dir, DataDirectory) else DataDirectory(data_dir)
        if embedding_backend is None:
            embedding_backend = build_embedding_backend(config.backend("embedding"))
        if generation_backend is None:
            generation_backend = build_generation_backend(config.backend("generation"))

        documents = {d.doc_id: d for d in dd.load_documents()} if dd.has(DOCUMENTS_FILE) else {}
        turns = {t.turn_id: t for t in dd.load_turns()} if dd.has(TURNS_FILE) else {}
        chunks = {c.chunk_id: c for c in dd.load_chunks()} if dd.has(CHUNKS_FILE) else {}
        enrichments = {
            e.chunk_id: e for e in dd.load_enrichments() if e.prompt_version == prompt_version
        }

        engine = None
        if dd.has(EMBEDDINGS_FILE):
            if dd.has(MANIFEST_FILE):
                manifest = dd.load_manifest()
                built_with = manifest.get("embedding_model", "")
                if built_with and built_with != embedding_backend.model:
                    raise RuntimeError(
                        f"index was built with embedding model '{built_with}' but "
                        f"'{embedding_backend.model}' is configured; rebuild the index "
                        "or fix the configuration"
                    )
            engine = SearchEngine.from_data_dir(dd)
        return cls(
            documents, turns, chunks, enrichments, engine, embedding_backend, generation_backend, config
        )

    # -- stage 1 -----------------------------------------------------------

    def ask(self, query: str, k: Optional[int] = None, flt: Optional[SearchFilter] = None) -> StageOneResult:
        q = query.strip()
        if not q:
            raise EmptyQuery()
        if self.engine is None or len(self.engine) == 0:
            raise EmptyIndex()
        vector = embed_text(q, self.embedding_backend, expected_dim=self.engine.dim)
        hits = self.engine.search(vector, k or self.config.retrieval.k, flt)

        budget = self.config.retrieval.stage1_char_budget
        used = 0
        out: list[StageOneHit] = []
        for hit in hits:
            enrichment = self.enrichments.get(hit.chunk_id)
            if enrichment is None:
                continue
            if used + len(enrichment.short_summary) > budget:
                break  # truncate the hit list, never individual summaries
            used += len(enrichment.short_summary)
            chunk = self.chunks[hit.chunk_id]
            turn = self.turns[chunk.turn_id]
            doc = self.documents[turn.doc_id]
            out.append(
                StageOneHit(
                    chunk_id=hit.chunk_id,
                    score=hit.score,
                    short_summary=enrichment.short_summary,
                    politician=enrichment.politician,
                    party=enrichment.party,
                    topic=enrichment.topic,
                    session_date=doc.session_date,
                    doc_id=doc.doc_id,
                )
            )
        return StageOneResult(query=q, hits=out)

    # -- stage 2 -----------------------------------------------------------

    def respond(self, query: str, chunk_id: str) -> StageTwoResponse:
        q = query.strip()
        if not q:
            raise EmptyQuery()
        chunk = self.chunks.get(chunk_id)
        if chunk is None:
            raise UnknownChunk(chunk_id)
        enrichment = self.enrichments.get(chunk_id)
        if enrichment is None:
            # a chunk without summaries is invisible to retrieval, so it is
            # not servable as a source either
            raise UnknownChunk(chunk_id)
        turn = self.turns[chunk.turn_id]
        doc = self.documents[turn.doc_id]

        if len(chunk.text) <= self.config.retrieval.stage2_char_budget:
            material, context_used = chunk.text, "raw_chunk"
        else:
            material, context_used = enrichment.full_summary, "full_summary"

        request = build_response_prompt(
            query=q,
            source_material=material,
            speaker=enrichment.politician,
            party=enrichment.party,
            topic=enrichment.topic,
            session=f"{doc.session_date.isoformat()} ({doc.session_type})",
            language=doc.language,
        )
        text = self.generation_backend.complete(request)
        if not text or not text.strip():
            raise EmptyBackendResponse("generation backend returned no text")
        return StageTwoResponse(
            query=q,
            chunk_id=chunk_id,
            response_text=text,
            context_used=context_used,
            backend_model=self.generation_backend.model,
        )

    # -- source + suggestions ----------------------------------------------

    def get_source(self, chunk_id: str) -> SourceBundle:
        chunk = self.chunks.get(chunk_id)
        if chunk is None:
            raise UnknownChunk(chunk_id)
        turn = self.turns[chunk.turn_id]
        if turn.text[chunk.char_start:chunk.char_end] != chunk.text:
            raise StoreIntegrityError(f"chunk {chunk_id}: span does not match turn text")
        return SourceBundle(chunk=chunk, turn=turn, document=self.documents[turn.doc_id])

    def suggestions(self) -> list[str]:
        return list(self.config.suggestions)
