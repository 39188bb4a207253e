"""Normalization wrapper around an embedding backend."""
from __future__ import annotations

from typing import Optional

import numpy as np

from ..errors import DimensionMismatch, ZeroVector

ZERO_NORM_EPS = 1e-12


def normalize_vector(raw: np.ndarray, expected_dim: Optional[int] = None) -> np.ndarray:
    vector = np.asarray(raw, dtype=np.float64)
    if vector.ndim != 1:
        raise ValueError("embedding must be one-dimensional")
    if expected_dim is not None and vector.shape[0] != expected_dim:
        raise DimensionMismatch(expected=expected_dim, got=vector.shape[0])
    norm = float(np.linalg.norm(vector))
    if norm < ZERO_NORM_EPS:
        raise ZeroVector()
    return (vector / norm).astype(np.float32)


def embed_text(text: str, backend, expected_dim: Optional[int] = None) -> np.ndarray:
    """Embed one text and return the unit-normalized float32 vector."""
    if not text:
        raise ValueError("text must be non-empty")
    raw = backend.embed([text])[0]
    return normalize_vector(np.asarray(raw), expected_dim=expected_dim)
