"""HTTP surface for the staged pipeline.

Every pipeline error type maps to exactly one machine-readable code and
status (see ERROR_MAP; an exhaustiveness test keeps it total). Responses
are whole-body JSON validated against the schemas shipped in schemas/.
"""
from __future__ import annotations

import datetime as dt
import time
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import errors
from .config import AppConfig
from .feedback import FeedbackStore
from .models import FEEDBACK_RATINGS, FEEDBACK_STAGES, SESSION_TYPES, SearchFilter
from .pipeline import QueryEngine
from .storage import DOCUMENTS_FILE, FEEDBACK_FILE, DataDirectory

# Pipeline error -> (code, http status). Service-level conditions (bad
# request bodies, rate limiting, missing stores) have their own codes.
ERROR_MAP: dict[type, tuple[str, int]] = {
    errors.EmptyQuery: ("empty_query", 400),
    errors.MalformedLine: ("malformed_line", 400),
    errors.DuplicateTurn: ("duplicate_turn", 400),
    errors.EmptyCorpus: ("empty_corpus", 400),
    errors.UnknownChunk: ("unknown_chunk", 404),
    errors.BackendUnavailable: ("backend_unavailable", 502),
    errors.EmptyBackendResponse: ("empty_backend_response", 502),
    errors.SchemaViolation: ("schema_violation", 502),
    errors.ZeroVector: ("zero_vector", 502),
    errors.DimensionMismatch: ("dimension_mismatch", 500),
    errors.EmptyIndex: ("empty_index", 500),
    errors.SchemaVersionMismatch: ("schema_version_mismatch", 500),
    errors.StoreIntegrityError: ("store_integrity", 500),
}


def _error_response(code: str, message: str, status: int) -> JSONResponse:
    return JSONResponse({"code": code, "message": message}, status_code=status)


class QueryFilterBody(BaseModel):
    politician: Optional[str] = None
    party: Optional[str] = None
    topic: Optional[str] = None
    session_type: Optional[str] = None
    date_from: Optional[str] = None
    date_to: Optional[str] = None


class QueryBody(BaseModel):
    query: str
    k: Optional[int] = None
    filter: Optional[QueryFilterBody] = None


class RespondBody(BaseModel):
    query: str


class FeedbackBody(BaseModel):
    query: str
    chunk_id: str
    stage: str
    rating: str


class _RateLimiter:
    """Fixed-window per-IP counter; limit <= 0 disables it."""

    def __init__(self, per_minute: int):
        self.per_minute = per_minute
        self._windows: dict[str, tuple[int, int]] = {}

    def allow(self, ip: str) -> bool:
        if self.per_minute <= 0:
            return True
        window = int(time.time() // 60)
        seen_window, count = self._windows.get(ip, (window, 0))
        if seen_window != window:
            count = 0
        count += 1
        self._windows[ip] = (window, count)
        return count <= self.per_minute


def _parse_filter(body: Optional[QueryFilterBody]) -> Optional[SearchFilter]:
    if body is None:
        return None
    if body.session_type is not None and body.session_type not in SESSION_TYPES:
        raise ValueError(f"session_type must be one of {SESSION_TYPES}")
    date_from = dt.date.fromisoformat(body.date_from) if body.date_from else None
    date_to = dt.date.fromisoformat(body.date_to) if body.date_to else None
    return SearchFilter(
        politician=body.politician,
        party=body.party,
        topic=body.topic,
        session_type=body.session_type,
        date_from=date_from,
        date_to=date_to,
    )


def create_app(
    data_dir: Path,
    config: Optional[AppConfig] = None,
    query_engine: Optional[QueryEngine] = None,
    frontend_dir: Optional[Path] = None,
) -> FastAPI:
    config = config or AppConfig()
    dd = DataDirectory(data_dir)
    if query_engine is None:
        query_engine = QueryEngine.from_data_dir(dd, config)
    feedback_store = FeedbackStore(
        dd.path(FEEDBACK_FILE),
        chunk_exists=lambda cid: cid in query_engine.chunks,
    )
    limiter = _RateLimiter(config.server.rate_limit_per_min)

    app = FastAPI(title="hansardqa", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[config.server.cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(errors.PipelineError)
    async def pipeline_error_handler(request: Request, exc: errors.PipelineError):
        code, status = ERROR_MAP.get(type(exc), ("internal_error", 500))
        return _error_response(code, str(exc), status)

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return _error_response("invalid_request", str(exc.errors()[:1]), 400)

    @app.post("/api/query")
    def api_query(body: QueryBody):
        try:
            flt = _parse_filter(body.filter)
        except ValueError as exc:
            return _error_response("invalid_request", str(exc), 400)
        if body.k is not None and body.k <= 0:
            return _error_response("invalid_request", "k must be positive", 400)
        result = query_engine.ask(body.query, k=body.k, flt=flt)
        return result.to_dict()

    @app.post("/api/chunks/{chunk_id}/respond")
    def api_respond(chunk_id: str, body: RespondBody, request: Request):
        client_ip = request.client.host if request.client else "unknown"
        if not limiter.allow(client_ip):
            return _error_response("rate_limited", "too many generation requests", 429)
        result = query_engine.respond(body.query, chunk_id)
        return result.to_dict()

    @app.get("/api/chunks/{chunk_id}/source")
    def api_source(chunk_id: str):
        return query_engine.get_source(chunk_id).to_dict()

    @app.post("/api/feedback", status_code=201)
    def api_feedback(body: FeedbackBody):
        if body.stage not in FEEDBACK_STAGES:
            return _error_response("invalid_request", f"stage must be one of {FEEDBACK_STAGES}", 400)
        if body.rating not in FEEDBACK_RATINGS:
            return _error_response("invalid_request", f"rating must be one of {FEEDBACK_RATINGS}", 400)
        event = feedback_store.record(body.query, body.chunk_id, body.stage, body.rating)
        return JSONResponse(event.to_dict(), status_code=201)

    @app.get("/api/suggestions")
    def api_suggestions():
        return {"suggestions": query_engine.suggestions()}

    @app.get("/api/health")
    def api_health():
        if not dd.has(DOCUMENTS_FILE) or not query_engine.documents:
            return _error_response("missing_stores", "data directory has no corpus", 500)
        indexed = len(query_engine.engine) if query_engine.engine is not None else 0
        return {
            "status": "ok" if indexed > 0 else "degraded",
            "corpus": {
                "documents": len(query_engine.documents),
                "chunks": len(query_engine.chunks),
                "indexed": indexed,
            },
            "model": query_engine.embedding_backend.model,
        }

    if frontend_dir is not None and Path(frontend_dir).exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
