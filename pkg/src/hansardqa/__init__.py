"""Retrieval-augmented question answering over parliamentary transcripts.

Pipeline stages: ingest transcript JSONL into speaker turns and chunks,
enrich each chunk with summaries and tags through a generation backend,
embed the summaries into an exact-search vector index, and serve staged
query interactions (ranked one-line summaries, per-source responses,
full sources) with binary user feedback.
"""

__version__ = "0.1.0"
