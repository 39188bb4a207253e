"""HTTP clients for generation and embedding backends.

Both speak the widely adopted chat-completion / embeddings JSON wire
format. Transient failures (transport errors, timeouts, 5xx, 429) are
retried with exponential backoff starting at 500 ms; anything else fails
immediately. After max_retries attempts the call raises
BackendUnavailable.
"""
from __future__ import annotations

import os
import time
from typing import Callable

import httpx

from .config import BackendConfig
from .errors import BackendUnavailable
from .models import BackendDescriptor, GenerationRequest

BACKOFF_INITIAL_S = 0.5


class _HttpClient:
    def __init__(
        self,
        descriptor: BackendDescriptor,
        sleep: Callable[[float], None] = time.sleep,
        transport: httpx.BaseTransport | None = None,
    ):
        self.descriptor = descriptor
        self.model = descriptor.model
        self.call_count = 0
        self._sleep = sleep
        self._client = httpx.Client(timeout=descriptor.timeout_ms / 1000.0, transport=transport)

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.descriptor.api_key_env:
            key = os.environ.get(self.descriptor.api_key_env, "")
            if key:
                headers["Authorization"] = f"Bearer {key}"
        return headers

    def _post(self, path: str, payload: dict) -> dict:
        url = self.descriptor.base_url.rstrip("/") + path
        attempts = max(1, self.descriptor.max_retries)
        last_error: Exception | None = None
        for attempt in range(attempts):
            if attempt > 0:
                self._sleep(BACKOFF_INITIAL_S * (2 ** (attempt - 1)))
            self.call_count += 1
            try:
                response = self._client.post(url, json=payload, headers=self._headers())
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code >= 500 or response.status_code == 429:
                last_error = BackendUnavailable(f"{url} returned {response.status_code}")
                continue
            if response.status_code >= 400:
                raise BackendUnavailable(f"{url} returned {response.status_code}: {response.text[:200]}")
            try:
                return response.json()
            except ValueError as exc:
                last_error = exc
                continue
        raise BackendUnavailable(f"{url} unavailable after {attempts} attempts: {last_error}")


class HttpGenerationBackend(_HttpClient):
    """Chat-completion client: POST {base_url}/chat/completions."""

    def complete(self, request: GenerationRequest) -> str:
        payload = {
            "model": self.descriptor.model,
            "messages": [
                {"role": "system", "content": request.system_instructions},
                {"role": "user", "content": request.user_content},
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        data = self._post("/chat/completions", payload)
        try:
            return str(data["choices"][0]["message"]["content"] or "")
        except (KeyError, IndexError, TypeError):
            raise BackendUnavailable("malformed chat-completion response")


class HttpEmbeddingBackend(_HttpClient):
    """Embeddings client: POST {base_url}/embeddings."""

    def embed(self, texts: list[str]) -> list[list[float]]:
        if not texts:
            return []
        payload = {"model": self.descriptor.model, "input": list(texts)}
        data = self._post("/embeddings", payload)
        try:
            rows = sorted(data["data"], key=lambda item: item.get("index", 0))
            vectors = [[float(x) for x in row["embedding"]] for row in rows]
        except (KeyError, TypeError):
            raise BackendUnavailable("malformed embeddings response")
        if len(vectors) != len(texts):
            raise BackendUnavailable(f"expected {len(texts)} embeddings, got {len(vectors)}")
        return vectors


def build_generation_backend(cfg: BackendConfig):
    from . import mocks

    if cfg.kind == "http":
        return HttpGenerationBackend(cfg.descriptor)
    if cfg.kind == "mock-template":
        return mocks.TemplateGenerationBackend(model=cfg.descriptor.model or "mock-template")
    if cfg.kind == "mock-echo":
        return mocks.EchoGenerationBackend(model=cfg.descriptor.model or "mock-echo")
    raise ValueError(f"unknown generation backend kind: {cfg.kind}")


def build_embedding_backend(cfg: BackendConfig):
    from . import mocks

    if cfg.kind == "http":
        return HttpEmbeddingBackend(cfg.descriptor)
    if cfg.kind == "mock-hash":
        if cfg.dim <= 0:
            raise ValueError("mock-hash embedding backend requires dim > 0")
        return mocks.HashEmbeddingBackend(dim=cfg.dim, model=cfg.descriptor.model or None)
    raise ValueError(f"unknown embedding backend kind: {cfg.kind}")
