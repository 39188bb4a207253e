import json

import pytest

from hansardqa import storage
from hansardqa.errors import SchemaVersionMismatch
from hansardqa.models import Chunk
from hansardqa.storage import (
    CHUNKS_FILE,
    EMBEDDINGS_FILE,
    DataDirectory,
    append_jsonl,
    atomic_write_bytes,
    integrity_check,
    read_jsonl,
    write_store,
)


def make_chunk(i: int) -> Chunk:
    return Chunk(
        chunk_id=f"d:0#{i}", turn_id="d:0", seq=i, text=f"chunk {i}", char_start=i * 10, char_end=i * 10 + 7
    )


class TestAtomicWrites:
    def test_roundtrip_100_chunks(self, tmp_path):
        chunks = [make_chunk(i) for i in range(100)]
        path = tmp_path / CHUNKS_FILE
        assert write_store((c.to_dict() for c in chunks), path) == 100
        loaded = [Chunk.from_dict(d) for d in read_jsonl(path)]
        assert loaded == chunks

    def test_crash_between_temp_and_rename_keeps_old_version(self, tmp_path, monkeypatch):
        path = tmp_path / "store.jsonl"
        write_store([{"v": 1}], path)

        def exploding_replace(src, dst):
            raise OSError("simulated crash")

        monkeypatch.setattr(storage.os, "replace", exploding_replace)
        with pytest.raises(OSError):
            write_store([{"v": 2}], path)
        monkeypatch.undo()
        assert read_jsonl(path) == [{"v": 1}]
        # no temp debris left behind
        assert [p.name for p in tmp_path.iterdir()] == ["store.jsonl"]

    def test_append_creates_file(self, tmp_path):
        path = tmp_path / "log.jsonl"
        append_jsonl(path, {"n": 1})
        append_jsonl(path, {"n": 2})
        assert read_jsonl(path) == [{"n": 1}, {"n": 2}]

    def test_atomic_write_overwrites_in_place(self, tmp_path):
        path = tmp_path / "blob.bin"
        atomic_write_bytes(path, b"old")
        atomic_write_bytes(path, b"new")
        assert path.read_bytes() == b"new"


class TestManifest:
    def test_write_and_load(self, tmp_path):
        dd = DataDirectory(tmp_path)
        dd.init()
        dd.write_manifest(embedding_model="m", dim=8, prompt_version="v1", config_fingerprint="abc")
        manifest = dd.load_manifest()
        assert manifest["schema_version"] == storage.SCHEMA_VERSION
        assert manifest["embedding_model"] == "m"
        assert manifest["dim"] == 8
        assert manifest["prompt_version"] == "v1"
        assert manifest["config_fingerprint"] == "abc"
        assert "built_at" in manifest

    def test_updates_merge(self, tmp_path):
        dd = DataDirectory(tmp_path)
        dd.init()
        dd.write_manifest(prompt_version="v1")
        dd.write_manifest(embedding_model="m", dim=4)
        manifest = dd.load_manifest()
        assert manifest["prompt_version"] == "v1"
        assert manifest["embedding_model"] == "m"

    def test_unknown_schema_version_rejected(self, tmp_path):
        dd = DataDirectory(tmp_path)
        dd.init()
        dd.write_manifest()
        raw = json.loads(dd.path("manifest.json").read_text())
        raw["schema_version"] = 99
        dd.path("manifest.json").write_text(json.dumps(raw))
        with pytest.raises(SchemaVersionMismatch):
            dd.load_manifest()


class TestIntegrityCheck:
    def test_fresh_pipeline_is_ok(self, built_data_dir):
        report = integrity_check(built_data_dir)
        assert report.ok
        assert report.orphans == []
        assert report.dangling == []
        assert report.problems == []

    def test_hand_deleted_chunk_is_dangling(self, built_data_dir):
        dd = built_data_dir
        rows = read_jsonl(dd.path(CHUNKS_FILE))
        removed = rows.pop(0)
        write_store(rows, dd.path(CHUNKS_FILE))
        report = integrity_check(dd)
        assert not report.ok
        assert any(removed["chunk_id"] in entry for entry in report.dangling)

    def test_truncated_embeddings_reported(self, built_data_dir):
        dd = built_data_dir
        blob = dd.path(EMBEDDINGS_FILE).read_bytes()
        dd.path(EMBEDDINGS_FILE).write_bytes(blob[:-1])
        report = integrity_check(dd)
        assert not report.ok
        assert any("embeddings.bin" in p for p in report.problems)

    def test_bad_magic_reported(self, built_data_dir):
        dd = built_data_dir
        blob = dd.path(EMBEDDINGS_FILE).read_bytes()
        dd.path(EMBEDDINGS_FILE).write_bytes(b"XXXX" + blob[4:])
        report = integrity_check(dd)
        assert any("bad magic" in p for p in report.problems)

    def test_turn_count_mismatch_reported(self, built_data_dir):
        dd = built_data_dir
        rows = read_jsonl(dd.path(storage.DOCUMENTS_FILE))
        rows[0]["turn_count"] += 1
        write_store(rows, dd.path(storage.DOCUMENTS_FILE))
        report = integrity_check(dd)
        assert any("turn_count" in p for p in report.problems)

    def test_span_mismatch_reported(self, built_data_dir):
        dd = built_data_dir
        rows = read_jsonl(dd.path(CHUNKS_FILE))
        rows[0]["text"] = "tampered " + rows[0]["text"]
        write_store(rows, dd.path(CHUNKS_FILE))
        report = integrity_check(dd)
        assert any("span" in p for p in report.problems)

    def test_orphan_turn_reported(self, built_data_dir):
        dd = built_data_dir
        rows = read_jsonl(dd.path(storage.DOCUMENTS_FILE))
        write_store(rows[1:], dd.path(storage.DOCUMENTS_FILE))
        report = integrity_check(dd)
        assert any("missing document" in o for o in report.orphans)
