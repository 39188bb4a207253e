"""Exception types raised across the pipeline.

Every subclass of PipelineError has a stable HTTP mapping in the service
layer; the mapping is enforced by an exhaustiveness test.
"""


class PipelineError(Exception):
    """Base class for all pipeline errors."""


class MalformedLine(PipelineError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateTurn(PipelineError):
    def __init__(self, doc_id: str, sequence: int):
        super().__init__(f"duplicate turn ({doc_id}, {sequence})")
        self.doc_id = doc_id
        self.sequence = sequence


class EmptyCorpus(PipelineError):
    def __init__(self):
        super().__init__("corpus file contains no turns")


class BackendUnavailable(PipelineError):
    pass


class EmptyBackendResponse(PipelineError):
    pass


class SchemaViolation(PipelineError):
    """Backend response unusable after the allowed number of attempts."""

    def __init__(self, attempt_count: int, reason: str = ""):
        detail = f" ({reason})" if reason else ""
        super().__init__(f"invalid backend response after {attempt_count} attempts{detail}")
        self.attempt_count = attempt_count
        self.reason = reason


class ZeroVector(PipelineError):
    def __init__(self):
        super().__init__("embedding has near-zero norm; refusing to normalize")


class DimensionMismatch(PipelineError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"expected embedding dimension {expected}, got {got}")
        self.expected = expected
        self.got = got


class EmptyIndex(PipelineError):
    def __init__(self):
        super().__init__("vector index is empty or missing")


class EmptyQuery(PipelineError):
    def __init__(self):
        super().__init__("query is empty after trimming")


class UnknownChunk(PipelineError):
    def __init__(self, chunk_id: str):
        super().__init__(f"unknown chunk: {chunk_id}")
        self.chunk_id = chunk_id


class SchemaVersionMismatch(PipelineError):
    def __init__(self, found: int, supported: int):
        super().__init__(f"data directory schema version {found} not supported (expected {supported})")
        self.found = found
        self.supported = supported


class StoreIntegrityError(PipelineError):
    """A stored record contradicts an invariant (e.g. chunk span mismatch)."""
