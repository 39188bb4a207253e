"""Scoring kernels for the exact scan.

The hot loop is the dot product of every stored row against the query.
Both kernels read float32 rows and accumulate in float64, so scores agree
with a float64 reference to ~1e-15 regardless of which path is active.

Set HANSARDQA_NO_NUMBA=1 to force the pure-numpy path; it is also used
automatically when numba is not importable. benchmarks/bench_kernels.py
compares the two.
"""
from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("HANSARDQA_NO_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG in ("1", "true", "yes")


def scores_numpy(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    """einsum keeps float64 accumulation without copying the matrix."""
    return np.einsum("ij,j->i", matrix, query, dtype=np.float64)


try:
    from numba import njit

    NUMBA_AVAILABLE = True

    @njit(cache=True, fastmath=True)
    def _scores_njit(matrix, query):
        n, d = matrix.shape
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            acc = 0.0
            for j in range(d):
                acc += np.float64(matrix[i, j]) * np.float64(query[j])
            out[i] = acc
        return out

    def scores_numba(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
        return _scores_njit(np.ascontiguousarray(matrix), np.ascontiguousarray(query))

except ImportError:
    NUMBA_AVAILABLE = False
    scores_numba = None


if NUMBA_AVAILABLE and not NUMBA_DISABLED:
    score_rows = scores_numba
    KERNEL_NAME = "numba"
else:
    score_rows = scores_numpy
    KERNEL_NAME = "numpy"


def available_kernels() -> dict:
    kernels = {"numpy": scores_numpy}
    if NUMBA_AVAILABLE:
        kernels["numba"] = scores_numba
    return kernels
