"""Domain records and their JSONL codecs.

All records serialize to flat JSON objects; ``from_dict``/``to_dict`` are
exact inverses (round-trip identity is property-tested).
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Optional

SESSION_TYPES = ("plenary", "committee")
FEEDBACK_STAGES = ("retrieval", "generation")
FEEDBACK_RATINGS = ("positive", "negative")


def parse_rfc3339(value: str) -> dt.datetime:
    ts = dt.datetime.fromisoformat(value.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=dt.timezone.utc)
    return ts


def format_rfc3339(ts: dt.datetime) -> str:
    return ts.astimezone(dt.timezone.utc).isoformat()


@dataclass(frozen=True)
class SessionDocument:
    doc_id: str
    session_date: dt.date
    session_type: str  # one of SESSION_TYPES
    language: str
    source_url: str
    turn_count: int

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "session_date": self.session_date.isoformat(),
            "session_type": self.session_type,
            "language": self.language,
            "source_url": self.source_url,
            "turn_count": self.turn_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SessionDocument":
        return cls(
            doc_id=d["doc_id"],
            session_date=dt.date.fromisoformat(d["session_date"]),
            session_type=d["session_type"],
            language=d["language"],
            source_url=d["source_url"],
            turn_count=d["turn_count"],
        )


@dataclass(frozen=True)
class SpeakerTurn:
    turn_id: str
    doc_id: str
    sequence: int
    speaker: str
    party: str
    text: str

    def to_dict(self) -> dict:
        return {
            "turn_id": self.turn_id,
            "doc_id": self.doc_id,
            "sequence": self.sequence,
            "speaker": self.speaker,
            "party": self.party,
            "text": self.text,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpeakerTurn":
        return cls(
            turn_id=d["turn_id"],
            doc_id=d["doc_id"],
            sequence=d["sequence"],
            speaker=d["speaker"],
            party=d["party"],
            text=d["text"],
        )


@dataclass(frozen=True)
class Chunk:
    chunk_id: str
    turn_id: str
    seq: int
    text: str
    char_start: int
    char_end: int

    def to_dict(self) -> dict:
        return {
            "chunk_id": self.chunk_id,
            "turn_id": self.turn_id,
            "seq": self.seq,
            "text": self.text,
            "char_start": self.char_start,
            "char_end": self.char_end,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Chunk":
        return cls(
            chunk_id=d["chunk_id"],
            turn_id=d["turn_id"],
            seq=d["seq"],
            text=d["text"],
            char_start=d["char_start"],
            char_end=d["char_end"],
        )


@dataclass(frozen=True)
class Enrichment:
    chunk_id: str
    full_summary: str
    short_summary: str
    politician: str
    party: str
    topic: str
    backend_model: str
    created_at: dt.datetime
    prompt_version: str

    def to_dict(self) -> dict:
        return {
            "chunk_id": self.chunk_id,
            "full_summary": self.full_summary,
            "short_summary": self.short_summary,
            "politician": self.politician,
            "party": self.party,
            "topic": self.topic,
            "backend_model": self.backend_model,
            "created_at": format_rfc3339(self.created_at),
            "prompt_version": self.prompt_version,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Enrichment":
        return cls(
            chunk_id=d["chunk_id"],
            full_summary=d["full_summary"],
            short_summary=d["short_summary"],
            politician=d["politician"],
            party=d["party"],
            topic=d["topic"],
            backend_model=d["backend_model"],
            created_at=parse_rfc3339(d["created_at"]),
            prompt_version=d["prompt_version"],
        )


@dataclass(frozen=True)
class FeedbackEvent:
    event_id: str
    query: str
    chunk_id: str
    stage: str  # one of FEEDBACK_STAGES
    rating: str  # one of FEEDBACK_RATINGS
    created_at: dt.datetime

    def to_dict(self) -> dict:
        return {
            "event_id": self.event_id,
            "query": self.query,
            "chunk_id": self.chunk_id,
            "stage": self.stage,
            "rating": self.rating,
            "created_at": format_rfc3339(self.created_at),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeedbackEvent":
        return cls(
            event_id=d["event_id"],
            query=d["query"],
            chunk_id=d["chunk_id"],
            stage=d["stage"],
            rating=d["rating"],
            created_at=parse_rfc3339(d["created_at"]),
        )


@dataclass(frozen=True)
class SearchFilter:
    politician: Optional[str] = None
    party: Optional[str] = None
    topic: Optional[str] = None
    session_type: Optional[str] = None
    date_from: Optional[dt.date] = None
    date_to: Optional[dt.date] = None

    def __post_init__(self):
        if self.date_from is not None and self.date_to is not None:
            if self.date_from > self.date_to:
                raise ValueError("date_from must not exceed date_to")

    def is_empty(self) -> bool:
        return all(
            v is None
            for v in (self.politician, self.party, self.topic, self.session_type, self.date_from, self.date_to)
        )


@dataclass(frozen=True)
class SearchHit:
    chunk_id: str
    score: float
    rank: int


@dataclass(frozen=True)
class StageOneHit:
    chunk_id: str
    score: float
    short_summary: str
    politician: str
    party: str
    topic: str
    session_date: dt.date
    doc_id: str

    def to_dict(self) -> dict:
        return {
            "chunk_id": self.chunk_id,
            "score": self.score,
            "short_summary": self.short_summary,
            "politician": self.politician,
            "party": self.party,
            "topic": self.topic,
            "session_date": self.session_date.isoformat(),
            "doc_id": self.doc_id,
        }


@dataclass(frozen=True)
class StageOneResult:
    query: str
    hits: list[StageOneHit]

    def to_dict(self) -> dict:
        return {"query": self.query, "hits": [h.to_dict() for h in self.hits]}


@dataclass(frozen=True)
class StageTwoResponse:
    query: str
    chunk_id: str
    response_text: str
    context_used: str  # "full_summary" | "raw_chunk"
    backend_model: str

    def to_dict(self) -> dict:
        return {
            "query": self.query,
            "chunk_id": self.chunk_id,
            "response_text": self.response_text,
            "context_used": self.context_used,
            "backend_model": self.backend_model,
        }


@dataclass(frozen=True)
class GenerationRequest:
    system_instructions: str
    user_content: str
    max_output_tokens: int
    temperature: float


@dataclass(frozen=True)
class BackendDescriptor:
    base_url: str
    model: str
    api_key_env: str
    timeout_ms: int = 30_000
    max_retries: int = 3
