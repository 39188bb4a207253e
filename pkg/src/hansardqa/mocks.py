"""Deterministic in-process backends for tests and offline runs.

These implement the same interfaces as the HTTP clients in backends.py
but are fully reproducible: the embedder is a feature-hashing bag of
tokens, and the generation mocks either replay a script, echo the
request, or derive a valid enrichment object from the statement text.
"""
from __future__ import annotations

import json

from .errors import BackendUnavailable
from .models import GenerationRequest
from .prompts import STATEMENT_MARKER

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h


class HashEmbeddingBackend:
    """Feature-hashing embedder: lowercase whitespace tokens, FNV-1a 64-bit
    bucket counts. Raw counts are returned; normalization happens upstream."""

    def __init__(self, dim: int, model: str | None = None):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = dim
        self.model = model or f"mock-hash-{dim}"
        self.call_count = 0
        self.texts_embedded = 0

    def embed(self, texts: list[str]) -> list[list[float]]:
        self.call_count += 1
        self.texts_embedded += len(texts)
        out = []
        for text in texts:
            counts = [0.0] * self.dim
            for token in text.lower().split():
                counts[fnv1a_64(token.encode("utf-8")) % self.dim] += 1.0
            out.append(counts)
        return out


class ScriptedGenerationBackend:
    """Replays a fixed sequence of responses; Exception entries are raised.

    With repeat_last=True the final entry answers every further call,
    which models a backend that always behaves the same way.
    """

    def __init__(self, script: list, repeat_last: bool = False, model: str = "mock-script"):
        if not script:
            raise ValueError("script must not be empty")
        self._script = list(script)
        self._repeat_last = repeat_last
        self._cursor = 0
        self.model = model
        self.call_count = 0
        self.requests: list[GenerationRequest] = []

    def complete(self, request: GenerationRequest) -> str:
        self.call_count += 1
        self.requests.append(request)
        if self._cursor >= len(self._script):
            if not self._repeat_last:
                raise BackendUnavailable("scripted backend exhausted")
            entry = self._script[-1]
        else:
            entry = self._script[self._cursor]
            self._cursor += 1
        if isinstance(entry, Exception):
            raise entry
        return entry


class EchoGenerationBackend:
    """Returns the request's user content verbatim (prompt-assembly probe)."""

    def __init__(self, model: str = "mock-echo"):
        self.model = model
        self.call_count = 0
        self.requests: list[GenerationRequest] = []

    def complete(self, request: GenerationRequest) -> str:
        self.call_count += 1
        self.requests.append(request)
        return request.user_content


class TemplateGenerationBackend:
    """Deterministic stand-in for a chat backend, keyed on the prompt shape.

    Enrichment prompts (they open with the speaker header) get a valid
    enrichment JSON derived from the statement after the statement marker;
    response prompts (they open with "Question:") get a plain-text answer
    quoting the statement. Keeps the pipeline runnable end to end with no
    external service.
    """

    def __init__(self, model: str = "mock-template", full_summary_chars: int = 2000):
        self.model = model
        self.full_summary_chars = full_summary_chars
        self.call_count = 0

    def complete(self, request: GenerationRequest) -> str:
        self.call_count += 1
        marker_at = request.user_content.find(STATEMENT_MARKER)
        statement = (
            request.user_content[marker_at + len(STATEMENT_MARKER):]
            if marker_at >= 0
            else request.user_content
        )
        statement = statement.strip() or "(empty)"
        if request.user_content.startswith("Question: "):
            question = request.user_content.split("\n", 1)[0][len("Question: "):]
            return f'Regarding "{question}", the source states: {statement}'
        tokens = statement.split()
        topic = next((t.strip(".,;:!?").lower() for t in tokens if len(t) >= 5), "general")
        short = statement.replace("\n", " ")[:200].strip()
        return json.dumps(
            {
                "full_summary": statement[: self.full_summary_chars],
                "short_summary": short,
                "politician": "",
                "party": "",
                "topic": topic,
            },
            ensure_ascii=False,
        )
