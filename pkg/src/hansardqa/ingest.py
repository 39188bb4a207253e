"""Parse canonical transcript JSONL into documents and speaker turns,
and segment turn text into bounded, contiguous chunks.

Chunks tile the turn exactly: boundaries fall on sentence ends (or on
hard-split cuts inside an overlong sentence), so concatenating a turn's
chunk texts reproduces the turn text byte for byte.
"""
from __future__ import annotations

import datetime as dt
import json
import re
from pathlib import Path

from .errors import DuplicateTurn, EmptyCorpus, MalformedLine
from .models import SESSION_TYPES, Chunk, SessionDocument, SpeakerTurn

# Keys required on every corpus line, and their expected types.
CORPUS_KEYS = {
    "doc_id": str,
    "session_date": str,
    "session_type": str,
    "language": str,
    "source_url": str,
    "sequence": int,
    "speaker": str,
    "party": str,
    "text": str,
}

_WS = re.compile(r"\s+")
_TERMINATORS = ".!?"


def normalize_whitespace(text: str) -> str:
    return _WS.sub(" ", text).strip()


def _validate_line(line_no: int, obj: object) -> dict:
    if not isinstance(obj, dict):
        raise MalformedLine(line_no, "not a JSON object")
    for key, typ in CORPUS_KEYS.items():
        if key not in obj:
            raise MalformedLine(line_no, f"missing key '{key}'")
        value = obj[key]
        if not isinstance(value, typ) or isinstance(value, bool):
            raise MalformedLine(line_no, f"key '{key}' must be {typ.__name__}")
    for key in obj:
        if key not in CORPUS_KEYS:
            raise MalformedLine(line_no, f"unexpected key '{key}'")
    if obj["session_type"] not in SESSION_TYPES:
        raise MalformedLine(line_no, f"invalid session_type '{obj['session_type']}'")
    try:
        dt.date.fromisoformat(obj["session_date"])
    except ValueError:
        raise MalformedLine(line_no, f"invalid session_date '{obj['session_date']}'")
    if obj["sequence"] < 0:
        raise MalformedLine(line_no, "negative sequence")
    return obj


def parse_corpus(path: Path, format: str = "jsonl") -> tuple[list[SessionDocument], list[SpeakerTurn]]:
    """Read a corpus file into documents and whitespace-normalized turns.

    Fails on the first malformed line; duplicate (doc_id, sequence) pairs
    and conflicting per-document metadata are rejected. Documents are
    returned sorted by doc_id, turns by (doc_id, sequence).
    """
    if format != "jsonl":
        raise ValueError(f"unsupported corpus format: {format}")
    raw = Path(path).read_bytes()

    doc_meta: dict[str, tuple[int, str, str, str, str]] = {}  # doc_id -> (line_no, date, type, lang, url)
    turns_by_key: dict[tuple[str, int], SpeakerTurn] = {}

    for line_no, line in enumerate(raw.splitlines(), start=1):
        try:
            decoded = line.decode("utf-8")
        except UnicodeDecodeError:
            raise MalformedLine(line_no, "invalid UTF-8")
        if not decoded.strip():
            raise MalformedLine(line_no, "empty line")
        try:
            obj = json.loads(decoded)
        except json.JSONDecodeError:
            raise MalformedLine(line_no, "invalid JSON")
        obj = _validate_line(line_no, obj)

        text = normalize_whitespace(obj["text"])
        if not text:
            raise MalformedLine(line_no, "empty text")
        speaker = normalize_whitespace(obj["speaker"])
        if not speaker:
            raise MalformedLine(line_no, "empty speaker")
        party = normalize_whitespace(obj["party"])

        doc_id = obj["doc_id"]
        meta = (obj["session_date"], obj["session_type"], obj["language"], obj["source_url"])
        if doc_id in doc_meta:
            if doc_meta[doc_id][1:] != meta:
                raise MalformedLine(line_no, f"conflicting document metadata for '{doc_id}'")
        else:
            doc_meta[doc_id] = (line_no, *meta)

        key = (doc_id, obj["sequence"])
        if key in turns_by_key:
            raise DuplicateTurn(doc_id, obj["sequence"])
        turns_by_key[key] = SpeakerTurn(
            turn_id=f"{doc_id}:{obj['sequence']}",
            doc_id=doc_id,
            sequence=obj["sequence"],
            speaker=speaker,
            party=party,
            text=text,
        )

    if not turns_by_key:
        raise EmptyCorpus()

    turns = [turns_by_key[key] for key in sorted(turns_by_key)]
    documents = []
    counts: dict[str, int] = {}
    for turn in turns:
        counts[turn.doc_id] = counts.get(turn.doc_id, 0) + 1
    for doc_id in sorted(doc_meta):
        _, date, stype, lang, url = doc_meta[doc_id]
        documents.append(
            SessionDocument(
                doc_id=doc_id,
                session_date=dt.date.fromisoformat(date),
                session_type=stype,
                language=lang,
                source_url=url,
                turn_count=counts[doc_id],
            )
        )
    return documents, turns


def segment_sentences(text: str) -> list[tuple[int, int]]:
    """Split normalized text into sentence spans.

    A boundary sits after '.', '!' or '?' followed by a space and an
    uppercase letter; the separator space belongs to neither span.
    Abbreviations are not treated specially.
    """
    if not text:
        return []
    spans: list[tuple[int, int]] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _TERMINATORS and i + 2 < n and text[i + 1] == " " and text[i + 2].isupper():
            spans.append((start, i + 1))
            start = i + 2
            i += 2
            continue
        i += 1
    spans.append((start, n))
    return spans


def chunk_turn(turn: SpeakerTurn, max_chunk_chars: int) -> list[Chunk]:
    """Greedily pack whole sentences into chunks of at most max_chunk_chars.

    Chunk boundaries fall on sentence ends, so the separator space after a
    closed chunk becomes the next chunk's leading character. A sentence
    that cannot fit on its own is hard-split at the last space inside the
    budget (at the budget if it has no space).
    """
    if max_chunk_chars < 32:
        raise ValueError("max_chunk_chars must be at least 32")
    text = turn.text
    spans = segment_sentences(text)
    if not spans:
        return []

    boundaries: list[int] = []
    start = 0
    prev_end = 0
    has_content = False
    for _, end in spans:
        if has_content and end - start > max_chunk_chars:
            boundaries.append(prev_end)
            start = prev_end
            has_content = False
        while end - start > max_chunk_chars:
            limit = start + max_chunk_chars
            cut = text.rfind(" ", start + 1, limit + 1)
            if cut == -1:
                cut = limit
            boundaries.append(cut)
            start = cut
        has_content = True
        prev_end = end
    boundaries.append(len(text))

    chunks: list[Chunk] = []
    chunk_start = 0
    for seq, chunk_end in enumerate(boundaries):
        chunks.append(
            Chunk(
                chunk_id=f"{turn.turn_id}#{seq}",
                turn_id=turn.turn_id,
                seq=seq,
                text=text[chunk_start:chunk_end],
                char_start=chunk_start,
                char_end=chunk_end,
            )
        )
        chunk_start = chunk_end
    return chunks
