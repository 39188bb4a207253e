import json

import pytest
from click.testing import CliRunner

from hansardqa.cli import main
from hansardqa.storage import DataDirectory

from conftest import corpus_line, write_corpus

CONFIG_TOML = """
[chunking]
max_chunk_chars = 2000

[retrieval]
k = 5

suggestions = ["Who pays the levy?"]

[backends.generation]
kind = "mock-template"
model = "mock-template"

[backends.embedding]
kind = "mock-hash"
model = "mock-hash-32"
dim = 32
"""


@pytest.fixture
def workspace(tmp_path):
    corpus = write_corpus(
        tmp_path / "corpus.jsonl",
        [
            corpus_line("d1", 0, "The harbour levy is overdue. Dredging needs funding."),
            corpus_line("d1", 1, "Rail freight could relieve the port entirely.", speaker="Carla Jans"),
        ],
    )
    config = tmp_path / "config.toml"
    config.write_text(CONFIG_TOML)
    data_dir = tmp_path / "data"
    return corpus, config, data_dir


def run(args):
    return CliRunner().invoke(main, args, catch_exceptions=False)


class TestPipelineCommands:
    def test_full_pipeline(self, workspace):
        corpus, config, data_dir = workspace

        result = run(["ingest", "--corpus", str(corpus), "--data-dir", str(data_dir),
                      "--config", str(config)])
        assert result.exit_code == 0, result.output
        assert "2 documents" not in result.output  # one document, two turns
        assert "1 documents, 2 turns" in result.output

        result = run(["enrich", "--data-dir", str(data_dir), "--config", str(config)])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["enriched"] == 2
        assert report["failed"] == []

        result = run(["index", "--data-dir", str(data_dir), "--config", str(config)])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output) == {"indexed": 2, "skipped": 0}

        result = run(["search", "--data-dir", str(data_dir), "--config", str(config),
                      "--query", "harbour levy dredging", "-k", "2"])
        assert result.exit_code == 0, result.output
        hits = json.loads(result.output)["hits"]
        assert hits[0]["chunk_id"] == "d1:0#0"

        result = run(["check", "--data-dir", str(data_dir)])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["ok"] is True

    def test_enrich_is_idempotent_across_invocations(self, workspace):
        corpus, config, data_dir = workspace
        run(["ingest", "--corpus", str(corpus), "--data-dir", str(data_dir), "--config", str(config)])
        run(["enrich", "--data-dir", str(data_dir), "--config", str(config)])
        result = run(["enrich", "--data-dir", str(data_dir), "--config", str(config)])
        report = json.loads(result.output)
        assert report == {"enriched": 0, "cached": 2, "failed": []}

    def test_ingest_rejects_malformed_corpus(self, tmp_path, workspace):
        _, config, data_dir = workspace
        bad = tmp_path / "bad.jsonl"
        bad.write_text("{broken\n")
        result = CliRunner().invoke(
            main, ["ingest", "--corpus", str(bad), "--data-dir", str(data_dir)]
        )
        assert result.exit_code == 1
        assert "invalid JSON" in result.output

    def test_search_with_filter(self, workspace):
        corpus, config, data_dir = workspace
        for cmd in (
            ["ingest", "--corpus", str(corpus), "--data-dir", str(data_dir), "--config", str(config)],
            ["enrich", "--data-dir", str(data_dir), "--config", str(config)],
            ["index", "--data-dir", str(data_dir), "--config", str(config)],
        ):
            run(cmd)
        result = run(["search", "--data-dir", str(data_dir), "--config", str(config),
                      "--query", "port relief", "--politician", "Carla Jans"])
        hits = json.loads(result.output)["hits"]
        assert hits
        assert all(h["politician"] == "Carla Jans" for h in hits)

    def test_feedback_export_jsonl(self, workspace):
        corpus, config, data_dir = workspace
        run(["ingest", "--corpus", str(corpus), "--data-dir", str(data_dir), "--config", str(config)])
        from hansardqa.feedback import FeedbackStore

        store = FeedbackStore(DataDirectory(data_dir).path("feedback.jsonl"))
        store.record("q1", "d1:0#0", "retrieval", "positive")
        store.record("q2", "d1:0#0", "generation", "negative")
        result = run(["feedback", "export", "--data-dir", str(data_dir)])
        lines = [json.loads(line) for line in result.output.strip().splitlines()]
        assert [l["query"] for l in lines] == ["q1", "q2"]

    def test_check_flags_broken_directory(self, workspace):
        corpus, config, data_dir = workspace
        run(["ingest", "--corpus", str(corpus), "--data-dir", str(data_dir), "--config", str(config)])
        chunks_file = DataDirectory(data_dir).path("chunks.jsonl")
        chunks_file.write_text("")  # wipe chunks; turns now have no children, fine
        DataDirectory(data_dir).path("enrichments.jsonl").write_text(
            json.dumps({
                "chunk_id": "ghost", "full_summary": "x", "short_summary": "x",
                "politician": "", "party": "", "topic": "", "backend_model": "m",
                "created_at": "2024-01-01T00:00:00+00:00", "prompt_version": "v1",
            }) + "\n"
        )
        result = CliRunner().invoke(main, ["check", "--data-dir", str(data_dir)])
        assert result.exit_code == 1
        assert json.loads(result.output)["ok"] is False
