"""Deterministic prompt templates for enrichment and response generation.

Editing a template must bump PROMPT_VERSION: the enrichment cache is keyed
by it, so stale summaries are regenerated instead of silently reused.
"""
from __future__ import annotations

from typing import Optional

from .models import Chunk, GenerationRequest, SessionDocument, SpeakerTurn

PROMPT_VERSION = "v1"

# The statement body always follows this marker; mock backends rely on it.
STATEMENT_MARKER = "Statement:\n"

ENRICHMENT_KEYS = ("full_summary", "short_summary", "politician", "party", "topic")

_ENRICH_SYSTEM = (
    "You annotate excerpts of parliamentary debate transcripts. "
    "Reply with a single JSON object and nothing else, using exactly these keys: "
    "full_summary (a comprehensive summary of the statement), "
    "short_summary (one line, at most 200 characters, no newlines), "
    "politician (the speaker's name), party (the speaker's party), "
    "topic (one short free-form label). "
    f"[prompt {PROMPT_VERSION}]"
)

_RESPONSE_SYSTEM = (
    "You answer questions about parliamentary debates using only the source "
    "material provided. Explain how the source addresses the question; do not "
    "invent facts that are not in the source. Answer in the language named in "
    "the session metadata."
)


def build_enrichment_prompt(
    chunk: Chunk,
    turn: SpeakerTurn,
    document: Optional[SessionDocument] = None,
    max_output_tokens: int = 1024,
) -> GenerationRequest:
    session = (
        f"{document.session_date.isoformat()} ({document.session_type}, {document.language})"
        if document
        else turn.doc_id
    )
    user_content = (
        f"Speaker: {turn.speaker}\n"
        f"Party: {turn.party}\n"
        f"Session: {session}\n"
        f"{STATEMENT_MARKER}{chunk.text}"
    )
    return GenerationRequest(
        system_instructions=_ENRICH_SYSTEM,
        user_content=user_content,
        max_output_tokens=max_output_tokens,
        temperature=0.0,
    )


def build_response_prompt(
    query: str,
    source_material: str,
    speaker: str,
    party: str,
    topic: str,
    session: str,
    language: str,
    max_output_tokens: int = 1024,
) -> GenerationRequest:
    user_content = (
        f"Question: {query}\n"
        f"Speaker: {speaker}\n"
        f"Party: {party}\n"
        f"Topic: {topic}\n"
        f"Session: {session}\n"
        f"Language: {language}\n"
        f"{STATEMENT_MARKER}{source_material}"
    )
    return GenerationRequest(
        system_instructions=_RESPONSE_SYSTEM,
        user_content=user_content,
        max_output_tokens=max_output_tokens,
        temperature=0.0,
    )
