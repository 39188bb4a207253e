"""Binary vector file and its sidecar id map.

embeddings.bin: magic "KRVX", u32 version, u32 dim, u32 count (all
little-endian), then count*dim float32 values row-major.
embeddings.idx.jsonl: line i holds {"chunk_id": ...} for row i.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import StoreIntegrityError
from ..storage import (
    EMBEDDINGS_FILE,
    EMBEDDINGS_IDX_FILE,
    INDEX_HEADER,
    INDEX_MAGIC,
    INDEX_VERSION,
    DataDirectory,
    atomic_write_bytes,
    jsonl_bytes,
    read_jsonl,
)


def write_index(data_dir: DataDirectory | Path, matrix: np.ndarray, chunk_ids: list[str]) -> None:
    dd = data_dir if isinstance(data_dir, DataDirectory) else DataDirectory(data_dir)
    matrix = np.ascontiguousarray(matrix, dtype=np.float32)
    if matrix.ndim != 2:
        matrix = matrix.reshape(len(chunk_ids), -1)
    count, dim = matrix.shape
    if count != len(chunk_ids):
        raise ValueError(f"{count} rows but {len(chunk_ids)} chunk ids")
    header = INDEX_HEADER.pack(INDEX_MAGIC, INDEX_VERSION, dim, count)
    atomic_write_bytes(dd.path(EMBEDDINGS_FILE), header + matrix.tobytes())
    atomic_write_bytes(
        dd.path(EMBEDDINGS_IDX_FILE),
        jsonl_bytes({"chunk_id": cid} for cid in chunk_ids),
    )


def read_index(data_dir: DataDirectory | Path) -> tuple[np.ndarray, list[str]]:
    dd = data_dir if isinstance(data_dir, DataDirectory) else DataDirectory(data_dir)
    blob = dd.path(EMBEDDINGS_FILE).read_bytes()
    if len(blob) < INDEX_HEADER.size:
        raise StoreIntegrityError("embeddings.bin: truncated header")
    magic, version, dim, count = INDEX_HEADER.unpack_from(blob)
    if magic != INDEX_MAGIC:
        raise StoreIntegrityError("embeddings.bin: bad magic")
    if version != INDEX_VERSION:
        raise StoreIntegrityError(f"embeddings.bin: unsupported version {version}")
    expected = INDEX_HEADER.size + count * dim * 4
    if len(blob) != expected:
        raise StoreIntegrityError(
            f"embeddings.bin: payload is {len(blob)} bytes, header implies {expected}"
        )
    matrix = np.frombuffer(blob, dtype="<f4", offset=INDEX_HEADER.size).reshape(count, dim).copy()
    chunk_ids = [row["chunk_id"] for row in read_jsonl(dd.path(EMBEDDINGS_IDX_FILE))]
    if len(chunk_ids) != count:
        raise StoreIntegrityError(
            f"embeddings.idx.jsonl: {len(chunk_ids)} rows, header says {count}"
        )
    return matrix, chunk_ids
