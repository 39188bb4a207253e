"""Append-only binary feedback log.

Events are flushed and fsynced before record() returns, so a crash right
after the call cannot lose them. The log is never mutated; export reads a
snapshot in append order.
"""
from __future__ import annotations

import datetime as dt
import threading
import uuid
from pathlib import Path
from typing import Callable, Optional

from .errors import EmptyQuery, UnknownChunk
from .models import FEEDBACK_RATINGS, FEEDBACK_STAGES, FeedbackEvent
from .storage import append_jsonl, read_jsonl


def _utc_now() -> dt.datetime:
    return dt.datetime.now(dt.timezone.utc)


class FeedbackStore:
    def __init__(
        self,
        path: Path,
        chunk_exists: Optional[Callable[[str], bool]] = None,
        clock: Callable[[], dt.datetime] = _utc_now,
    ):
        self.path = Path(path)
        self._chunk_exists = chunk_exists
        self._clock = clock
        self._lock = threading.Lock()

    def record(self, query: str, chunk_id: str, stage: str, rating: str) -> FeedbackEvent:
        if not query.strip():
            raise EmptyQuery()
        if stage not in FEEDBACK_STAGES:
            raise ValueError(f"stage must be one of {FEEDBACK_STAGES}")
        if rating not in FEEDBACK_RATINGS:
            raise ValueError(f"rating must be one of {FEEDBACK_RATINGS}")
        if self._chunk_exists is not None and not self._chunk_exists(chunk_id):
            raise UnknownChunk(chunk_id)
        event = FeedbackEvent(
            event_id=uuid.uuid4().hex,
            query=query,
            chunk_id=chunk_id,
            stage=stage,
            rating=rating,
            created_at=self._clock(),
        )
        with self._lock:
            append_jsonl(self.path, event.to_dict())
        return event

    def export(self, since: Optional[dt.datetime] = None) -> list[FeedbackEvent]:
        if not self.path.exists():
            return []
        events = [FeedbackEvent.from_dict(d) for d in read_jsonl(self.path)]
        if since is not None:
            events = [e for e in events if e.created_at >= since]
        return events
