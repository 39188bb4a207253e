"""Durable storage under a single data directory.

Rebuilt stores (documents, turns, chunks, index, manifest) are written via
temp file + fsync + atomic rename, so a crash never exposes a partial
file. Enrichments and feedback are append-only JSONL with a flush+fsync
per record.
"""
from __future__ import annotations

import datetime as dt
import json
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import SchemaVersionMismatch
from .models import Chunk, Enrichment, FeedbackEvent, SessionDocument, SpeakerTurn

SCHEMA_VERSION = 1

DOCUMENTS_FILE = "documents.jsonl"
TURNS_FILE = "turns.jsonl"
CHUNKS_FILE = "chunks.jsonl"
ENRICHMENTS_FILE = "enrichments.jsonl"
EMBEDDINGS_FILE = "embeddings.bin"
EMBEDDINGS_IDX_FILE = "embeddings.idx.jsonl"
FEEDBACK_FILE = "feedback.jsonl"
MANIFEST_FILE = "manifest.json"

INDEX_MAGIC = b"KRVX"
INDEX_VERSION = 1
INDEX_HEADER = struct.Struct("<4sIII")  # magic, version, dim, count


def _fsync_dir(path: Path) -> None:
    fd = os.open(path, os.O_RDONLY)
    try:
        os.fsync(fd)
    finally:
        os.close(fd)


def atomic_write_bytes(path: Path, data: bytes) -> None:
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp{os.getpid()}")
    try:
        with open(tmp, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    _fsync_dir(path.parent)


def jsonl_bytes(records: Iterable[dict]) -> bytes:
    lines = [json.dumps(r, ensure_ascii=False) for r in records]
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def write_store(records: Iterable[dict], path: Path) -> int:
    records = list(records)
    atomic_write_bytes(path, jsonl_bytes(records))
    return len(records)


def read_jsonl(path: Path) -> list[dict]:
    out = []
    with open(path, "rb") as fh:
        for line in fh.read().splitlines():
            if line.strip():
                out.append(json.loads(line.decode("utf-8")))
    return out


def append_jsonl(path: Path, record: dict) -> None:
    with open(path, "ab") as fh:
        fh.write((json.dumps(record, ensure_ascii=False) + "\n").encode("utf-8"))
        fh.flush()
        os.fsync(fh.fileno())


class DataDirectory:
    """Typed access to every store file under one root."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def init(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        return self.root / name

    def has(self, name: str) -> bool:
        return self.path(name).exists()

    # -- manifest ---------------------------------------------------------

    def write_manifest(self, **updates) -> dict:
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "embedding_model": "",
            "dim": 0,
            "prompt_version": "",
            "config_fingerprint": "",
        }
        if self.has(MANIFEST_FILE):
            manifest.update(self.load_manifest())
        manifest.update(updates)
        manifest["schema_version"] = SCHEMA_VERSION
        manifest["built_at"] = dt.datetime.now(dt.timezone.utc).isoformat()
        atomic_write_bytes(
            self.path(MANIFEST_FILE),
            (json.dumps(manifest, indent=2, ensure_ascii=False) + "\n").encode("utf-8"),
        )
        return manifest

    def load_manifest(self) -> dict:
        with open(self.path(MANIFEST_FILE), "rb") as fh:
            manifest = json.load(fh)
        version = manifest.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaVersionMismatch(found=version, supported=SCHEMA_VERSION)
        return manifest

    # -- rebuilt stores ---------------------------------------------------

    def save_documents(self, documents: list[SessionDocument]) -> int:
        return write_store((d.to_dict() for d in documents), self.path(DOCUMENTS_FILE))

    def load_documents(self) -> list[SessionDocument]:
        return [SessionDocument.from_dict(d) for d in read_jsonl(self.path(DOCUMENTS_FILE))]

    def save_turns(self, turns: list[SpeakerTurn]) -> int:
        return write_store((t.to_dict() for t in turns), self.path(TURNS_FILE))

    def load_turns(self) -> list[SpeakerTurn]:
        return [SpeakerTurn.from_dict(d) for d in read_jsonl(self.path(TURNS_FILE))]

    def save_chunks(self, chunks: list[Chunk]) -> int:
        return write_store((c.to_dict() for c in chunks), self.path(CHUNKS_FILE))

    def load_chunks(self) -> list[Chunk]:
        return [Chunk.from_dict(d) for d in read_jsonl(self.path(CHUNKS_FILE))]

    # -- append-only stores ----------------------------------------------

    def append_enrichment(self, enrichment: Enrichment) -> None:
        append_jsonl(self.path(ENRICHMENTS_FILE), enrichment.to_dict())

    def load_enrichments(self) -> list[Enrichment]:
        if not self.has(ENRICHMENTS_FILE):
            return []
        return [Enrichment.from_dict(d) for d in read_jsonl(self.path(ENRICHMENTS_FILE))]

    def load_feedback(self) -> list[FeedbackEvent]:
        if not self.has(FEEDBACK_FILE):
            return []
        return [FeedbackEvent.from_dict(d) for d in read_jsonl(self.path(FEEDBACK_FILE))]


@dataclass
class IntegrityReport:
    orphans: list[str] = field(default_factory=list)
    dangling: list[str] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.orphans or self.dangling or self.problems)

    def to_dict(self) -> dict:
        return {
            "orphans": self.orphans,
            "dangling": self.dangling,
            "problems": self.problems,
            "ok": self.ok,
        }


def integrity_check(data_dir: DataDirectory | Path) -> IntegrityReport:
    """Verify referential integrity and the vector-file header.

    Problems are reported, never raised: the report lists orphans (records
    whose parent is missing), dangling chunk references, and structural
    faults such as a truncated embeddings file.
    """
    dd = data_dir if isinstance(data_dir, DataDirectory) else DataDirectory(data_dir)
    report = IntegrityReport()

    try:
        if dd.has(MANIFEST_FILE):
            dd.load_manifest()
    except SchemaVersionMismatch as exc:
        report.problems.append(f"manifest: {exc}")

    documents = dd.load_documents() if dd.has(DOCUMENTS_FILE) else []
    turns = dd.load_turns() if dd.has(TURNS_FILE) else []
    chunks = dd.load_chunks() if dd.has(CHUNKS_FILE) else []

    doc_ids = {d.doc_id for d in documents}
    turn_by_id = {t.turn_id: t for t in turns}
    chunk_ids = {c.chunk_id for c in chunks}

    for turn in turns:
        if turn.doc_id not in doc_ids:
            report.orphans.append(f"turn {turn.turn_id}: missing document {turn.doc_id}")
    for chunk in chunks:
        turn = turn_by_id.get(chunk.turn_id)
        if turn is None:
            report.orphans.append(f"chunk {chunk.chunk_id}: missing turn {chunk.turn_id}")
        elif turn.text[chunk.char_start:chunk.char_end] != chunk.text:
            report.problems.append(f"chunk {chunk.chunk_id}: span does not match turn text")

    turn_counts: dict[str, int] = {}
    for turn in turns:
        turn_counts[turn.doc_id] = turn_counts.get(turn.doc_id, 0) + 1
    for doc in documents:
        actual = turn_counts.get(doc.doc_id, 0)
        if doc.turn_count != actual:
            report.problems.append(
                f"document {doc.doc_id}: turn_count {doc.turn_count} but {actual} turns stored"
            )

    if dd.has(ENRICHMENTS_FILE):
        for enrichment in dd.load_enrichments():
            if enrichment.chunk_id not in chunk_ids:
                report.dangling.append(f"enrichment for missing chunk {enrichment.chunk_id}")
    if dd.has(FEEDBACK_FILE):
        for event in dd.load_feedback():
            if event.chunk_id not in chunk_ids:
                report.dangling.append(f"feedback {event.event_id} for missing chunk {event.chunk_id}")

    if dd.has(EMBEDDINGS_FILE):
        blob = dd.path(EMBEDDINGS_FILE).read_bytes()
        if len(blob) < INDEX_HEADER.size:
            report.problems.append("embeddings.bin: truncated header")
        else:
            magic, version, dim, count = INDEX_HEADER.unpack_from(blob)
            if magic != INDEX_MAGIC:
                report.problems.append("embeddings.bin: bad magic")
            elif version != INDEX_VERSION:
                report.problems.append(f"embeddings.bin: unsupported version {version}")
            else:
                expected = INDEX_HEADER.size + count * dim * 4
                if len(blob) != expected:
                    report.problems.append(
                        f"embeddings.bin: payload is {len(blob)} bytes, header implies {expected}"
                    )
                if dd.has(EMBEDDINGS_IDX_FILE):
                    sidecar = read_jsonl(dd.path(EMBEDDINGS_IDX_FILE))
                    if len(sidecar) != count:
                        report.problems.append(
                            f"embeddings.idx.jsonl: {len(sidecar)} rows, header says {count}"
                        )
                    for row in sidecar:
                        if row.get("chunk_id") not in chunk_ids:
                            report.dangling.append(f"index row for missing chunk {row.get('chunk_id')}")
                else:
                    report.problems.append("embeddings.idx.jsonl missing beside embeddings.bin")

    return report
