"""Command-line entry points for the pipeline stages and the server."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .backends import build_embedding_backend, build_generation_backend
from .config import load_config
from .enrich import enrich_corpus
from .errors import PipelineError
from .feedback import FeedbackStore
from .index import index_corpus
from .ingest import chunk_turn, parse_corpus
from .models import SearchFilter, parse_rfc3339
from .pipeline import QueryEngine
from .prompts import PROMPT_VERSION
from .storage import FEEDBACK_FILE, DataDirectory, integrity_check


@click.group()
def main():
    """Retrieval-augmented QA over parliamentary transcripts."""


def _config(path: str | None):
    return load_config(Path(path) if path else None)


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--data-dir", required=True, type=click.Path(path_type=Path))
@click.option("--max-chunk-chars", default=None, type=int)
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path))
def ingest(corpus: Path, data_dir: Path, max_chunk_chars: int | None, config_path):
    """Parse a corpus JSONL file and write documents, turns, and chunks."""
    cfg = _config(config_path)
    budget = max_chunk_chars or cfg.chunking.max_chunk_chars
    try:
        documents, turns = parse_corpus(corpus)
    except PipelineError as exc:
        raise click.ClickException(str(exc))
    chunks = []
    for turn in turns:
        chunks.extend(chunk_turn(turn, budget))
    dd = DataDirectory(data_dir)
    dd.init()
    dd.save_documents(documents)
    dd.save_turns(turns)
    dd.save_chunks(chunks)
    dd.write_manifest(prompt_version=PROMPT_VERSION, config_fingerprint=cfg.fingerprint())
    click.echo(f"ingested {len(documents)} documents, {len(turns)} turns, {len(chunks)} chunks")


@main.command()
@click.option("--data-dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--backend", "backend_name", default="generation")
@click.option("--concurrency", default=4, type=int)
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path))
def enrich(data_dir: Path, backend_name: str, concurrency: int, config_path):
    """Generate summaries and tags for every chunk that lacks them."""
    cfg = _config(config_path)
    backend = build_generation_backend(cfg.backend(backend_name))
    dd = DataDirectory(data_dir)
    chunks = dd.load_chunks()
    turns = {t.turn_id: t for t in dd.load_turns()}
    documents = {d.doc_id: d for d in dd.load_documents()}
    existing = {(e.chunk_id, e.prompt_version) for e in dd.load_enrichments()}
    report = enrich_corpus(
        chunks,
        turns,
        backend,
        store_append=dd.append_enrichment,
        existing=existing,
        documents=documents,
        concurrency_limit=concurrency,
        max_chunk_chars=cfg.chunking.max_chunk_chars,
    )
    dd.write_manifest(prompt_version=PROMPT_VERSION)
    click.echo(json.dumps(report.to_dict()))
    if report.failed:
        sys.exit(1)


@main.command()
@click.option("--data-dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--backend", "backend_name", default="embedding")
@click.option("--dim", default=None, type=int)
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path))
def index(data_dir: Path, backend_name: str, dim: int | None, config_path):
    """Embed enriched chunks and write the vector index."""
    cfg = _config(config_path)
    backend = build_embedding_backend(cfg.backend(backend_name))
    report = index_corpus(
        DataDirectory(data_dir),
        backend,
        embed_source=cfg.retrieval.embed_source,
        dim_hint=dim,
    )
    click.echo(json.dumps(report))


@main.command()
@click.option("--data-dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--query", required=True)
@click.option("-k", default=None, type=int)
@click.option("--politician", default=None)
@click.option("--party", default=None)
@click.option("--topic", default=None)
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path))
def search(data_dir: Path, query: str, k: int | None, politician, party, topic, config_path):
    """Run a stage-1 query and print the ranked summaries."""
    cfg = _config(config_path)
    engine = QueryEngine.from_data_dir(DataDirectory(data_dir), cfg)
    flt = SearchFilter(politician=politician, party=party, topic=topic)
    try:
        result = engine.ask(query, k=k, flt=flt)
    except PipelineError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(result.to_dict(), ensure_ascii=False, indent=2))


@main.group()
def feedback():
    """Feedback log utilities."""


@feedback.command("export")
@click.option("--data-dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--since", default=None)
def feedback_export(data_dir: Path, since):
    """Print feedback events as JSONL, optionally from a timestamp on."""
    store = FeedbackStore(DataDirectory(data_dir).path(FEEDBACK_FILE))
    since_ts = parse_rfc3339(since) if since else None
    for event in store.export(since=since_ts):
        click.echo(json.dumps(event.to_dict(), ensure_ascii=False))


@main.command()
@click.option("--data-dir", required=True, type=click.Path(exists=True, path_type=Path))
def check(data_dir: Path):
    """Verify referential integrity and the vector file header."""
    report = integrity_check(DataDirectory(data_dir))
    click.echo(json.dumps(report.to_dict(), indent=2))
    if not report.ok:
        sys.exit(1)


@main.command()
@click.option("--data-dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path))
@click.option("--frontend", default=None, type=click.Path(path_type=Path))
def serve(data_dir: Path, config_path, frontend):
    """Serve the HTTP API (and the UI bundle when --frontend is given)."""
    import uvicorn

    from .service import create_app

    cfg = _config(config_path)
    app = create_app(data_dir, cfg, frontend_dir=frontend)
    uvicorn.run(app, host=cfg.server.host, port=cfg.server.port)


if __name__ == "__main__":
    main()
