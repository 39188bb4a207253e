"""Per-chunk enrichment: one structured backend call yields the full
summary, one-line summary, and politician/party/topic tags.

Enrichments are cached by (chunk_id, prompt_version): re-running the pass
never repeats a backend call for a chunk that is already enriched under
the current prompt version.
"""
from __future__ import annotations

import datetime as dt
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import SchemaViolation
from .models import Chunk, Enrichment, SessionDocument, SpeakerTurn
from .prompts import PROMPT_VERSION, build_enrichment_prompt

SHORT_SUMMARY_MAX_CHARS = 200
DEFAULT_MAX_RETRIES = 3


def _utc_now() -> dt.datetime:
    return dt.datetime.now(dt.timezone.utc)


def _parse_backend_json(text: str) -> dict:
    cleaned = text.strip()
    if cleaned.startswith("```"):
        cleaned = cleaned.strip("`")
        if cleaned.startswith("json"):
            cleaned = cleaned[4:]
        cleaned = cleaned.strip()
    obj = json.loads(cleaned)
    if not isinstance(obj, dict):
        raise ValueError("backend response is not a JSON object")
    return obj


def _validate_enrichment(
    obj: dict,
    chunk: Chunk,
    turn: SpeakerTurn,
    max_chunk_chars: int,
    backend_model: str,
    prompt_version: str,
    clock: Callable[[], dt.datetime],
) -> Enrichment:
    full_summary = str(obj.get("full_summary", "")).strip()
    short_summary = str(obj.get("short_summary", "")).strip()
    if not full_summary:
        raise ValueError("empty full_summary")
    if not short_summary:
        raise ValueError("empty short_summary")
    if len(short_summary) > SHORT_SUMMARY_MAX_CHARS:
        raise ValueError(f"short_summary exceeds {SHORT_SUMMARY_MAX_CHARS} chars")
    if "\n" in short_summary:
        raise ValueError("short_summary contains a newline")
    if len(full_summary) > max_chunk_chars:
        raise ValueError(f"full_summary exceeds {max_chunk_chars} chars")

    # Source metadata wins over model output for identity fields.
    politician = turn.speaker or str(obj.get("politician", "")).strip()
    party = turn.party or str(obj.get("party", "")).strip()
    topic = str(obj.get("topic", "")).strip()

    return Enrichment(
        chunk_id=chunk.chunk_id,
        full_summary=full_summary,
        short_summary=short_summary,
        politician=politician,
        party=party,
        topic=topic,
        backend_model=backend_model,
        created_at=clock(),
        prompt_version=prompt_version,
    )


def enrich_chunk(
    chunk: Chunk,
    turn: SpeakerTurn,
    backend,
    document: Optional[SessionDocument] = None,
    max_chunk_chars: int = 2000,
    max_retries: int = DEFAULT_MAX_RETRIES,
    prompt_version: str = PROMPT_VERSION,
    clock: Callable[[], dt.datetime] = _utc_now,
) -> Enrichment:
    """Issue one structured request (retried on unusable responses) and
    return the validated enrichment.

    Raises SchemaViolation after max_retries unusable responses;
    BackendUnavailable propagates from the backend client.
    """
    request = build_enrichment_prompt(chunk, turn, document)
    attempts = max(1, max_retries)
    last_reason = ""
    for _ in range(attempts):
        text = backend.complete(request)
        try:
            obj = _parse_backend_json(text)
            return _validate_enrichment(
                obj, chunk, turn, max_chunk_chars, backend.model, prompt_version, clock
            )
        except (ValueError, json.JSONDecodeError) as exc:
            last_reason = str(exc)
    raise SchemaViolation(attempt_count=attempts, reason=last_reason)


@dataclass
class EnrichReport:
    enriched: int = 0
    cached: int = 0
    failed: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"enriched": self.enriched, "cached": self.cached, "failed": self.failed}


def enrich_corpus(
    chunks: list[Chunk],
    turns: dict[str, SpeakerTurn],
    backend,
    store_append: Callable[[Enrichment], None],
    existing: set[tuple[str, str]],
    documents: Optional[dict[str, SessionDocument]] = None,
    concurrency_limit: int = 4,
    max_chunk_chars: int = 2000,
    max_retries: int = DEFAULT_MAX_RETRIES,
    prompt_version: str = PROMPT_VERSION,
    clock: Callable[[], dt.datetime] = _utc_now,
) -> EnrichReport:
    """Enrich every chunk that has no stored enrichment for the current
    prompt version. Per-chunk failures are collected, not fatal; appends
    are serialized through a single lock."""
    if concurrency_limit < 1:
        raise ValueError("concurrency_limit must be positive")
    documents = documents or {}
    report = EnrichReport()
    write_lock = threading.Lock()

    todo: list[Chunk] = []
    for chunk in chunks:
        if (chunk.chunk_id, prompt_version) in existing:
            report.cached += 1
        else:
            todo.append(chunk)

    def work(chunk: Chunk) -> tuple[str, Optional[Enrichment], Optional[Exception]]:
        turn = turns[chunk.turn_id]
        doc = documents.get(turn.doc_id)
        try:
            enrichment = enrich_chunk(
                chunk,
                turn,
                backend,
                document=doc,
                max_chunk_chars=max_chunk_chars,
                max_retries=max_retries,
                prompt_version=prompt_version,
                clock=clock,
            )
            return chunk.chunk_id, enrichment, None
        except Exception as exc:
            return chunk.chunk_id, None, exc

    if todo:
        with ThreadPoolExecutor(max_workers=concurrency_limit) as pool:
            for chunk_id, enrichment, error in pool.map(work, todo):
                if error is not None:
                    report.failed.append(chunk_id)
                    continue
                with write_lock:
                    store_append(enrichment)
                report.enriched += 1
    return report
