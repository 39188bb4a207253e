"""Application configuration loaded from a TOML file.

Sections: chunking, retrieval, server, suggestions, and one
``[backends.<name>]`` table per backend. Every field has a default, so a
missing file yields a usable configuration (with mock backends).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .models import BackendDescriptor

# Retrieval text choices for indexing.
EMBED_SOURCES = ("full_summary", "raw_chunk")


@dataclass(frozen=True)
class BackendConfig:
    """One named backend: an HTTP endpoint or a deterministic mock."""

    kind: str  # "http" | "mock-hash" | "mock-template" | "mock-echo"
    descriptor: BackendDescriptor
    dim: int = 0  # mock-hash embedding dimension

    @classmethod
    def from_table(cls, table: dict) -> "BackendConfig":
        return cls(
            kind=table.get("kind", "http"),
            descriptor=BackendDescriptor(
                base_url=table.get("base_url", ""),
                model=table.get("model", ""),
                api_key_env=table.get("api_key_env", ""),
                timeout_ms=int(table.get("timeout_ms", 30_000)),
                max_retries=int(table.get("max_retries", 3)),
            ),
            dim=int(table.get("dim", 0)),
        )


@dataclass(frozen=True)
class ChunkingConfig:
    max_chunk_chars: int = 2000


@dataclass(frozen=True)
class RetrievalConfig:
    k: int = 10
    stage1_char_budget: int = 4000
    stage2_char_budget: int = 4000
    embed_source: str = "full_summary"


@dataclass(frozen=True)
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8077
    cors_origin: str = "*"
    rate_limit_per_min: int = 30


def _default_backends() -> dict[str, BackendConfig]:
    return {
        "generation": BackendConfig(
            kind="mock-template",
            descriptor=BackendDescriptor(base_url="", model="mock-template", api_key_env=""),
        ),
        "embedding": BackendConfig(
            kind="mock-hash",
            descriptor=BackendDescriptor(base_url="", model="mock-hash-64", api_key_env=""),
            dim=64,
        ),
    }


@dataclass(frozen=True)
class AppConfig:
    chunking: ChunkingConfig = field(default_factory=ChunkingConfig)
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    server: ServerConfig = field(default_factory=ServerConfig)
    suggestions: tuple[str, ...] = ()
    backends: dict[str, BackendConfig] = field(default_factory=_default_backends)

    def backend(self, name: str) -> BackendConfig:
        if name not in self.backends:
            raise KeyError(f"no [backends.{name}] section configured")
        return self.backends[name]

    def fingerprint(self) -> str:
        """Stable digest of the settings that shape index/enrichment output."""
        emb = self.backends.get("embedding")
        payload = {
            "max_chunk_chars": self.chunking.max_chunk_chars,
            "embed_source": self.retrieval.embed_source,
            "embedding_kind": emb.kind if emb else "",
            "embedding_model": emb.descriptor.model if emb else "",
            "embedding_dim": emb.dim if emb else 0,
        }
        blob = json.dumps(payload, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()[:16]


def load_config(path: Optional[Path] = None) -> AppConfig:
    """Read configuration from ``path``; missing file means all defaults."""
    if path is None or not Path(path).exists():
        return AppConfig()
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)

    chunking = ChunkingConfig(
        max_chunk_chars=int(raw.get("chunking", {}).get("max_chunk_chars", 2000)),
    )
    rt = raw.get("retrieval", {})
    retrieval = RetrievalConfig(
        k=int(rt.get("k", 10)),
        stage1_char_budget=int(rt.get("stage1_char_budget", 4000)),
        stage2_char_budget=int(rt.get("stage2_char_budget", 4000)),
        embed_source=rt.get("embed_source", "full_summary"),
    )
    if retrieval.embed_source not in EMBED_SOURCES:
        raise ValueError(f"retrieval.embed_source must be one of {EMBED_SOURCES}")
    sv = raw.get("server", {})
    server = ServerConfig(
        host=sv.get("host", "127.0.0.1"),
        port=int(sv.get("port", 8077)),
        cors_origin=sv.get("cors_origin", "*"),
        rate_limit_per_min=int(sv.get("rate_limit_per_min", 30)),
    )
    backends = dict(_default_backends())
    for name, table in raw.get("backends", {}).items():
        backends[name] = BackendConfig.from_table(table)
    return AppConfig(
        chunking=chunking,
        retrieval=retrieval,
        server=server,
        suggestions=tuple(raw.get("suggestions", [])),
        backends=backends,
    )
