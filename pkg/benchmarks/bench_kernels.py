#!/usr/bin/env python3
"""Benchmark the scoring kernels: numba @njit vs the pure-numpy fallback.

Times the exact-scan dot product over a random unit-vector matrix and
verifies both paths agree to float64 precision. The numpy path is the
one selected by HANSARDQA_NO_NUMBA=1 at runtime.

Usage:
    python benchmarks/bench_kernels.py [--rows N] [--dim D] [--repeats R]
"""
import argparse
import time

import numpy as np

from hansardqa.index.kernels import NUMBA_AVAILABLE, available_kernels


def time_kernel(fn, matrix, query, repeats: int) -> list[float]:
    fn(matrix[:256], query)  # warmup / JIT compile
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(matrix, query)
        times.append(time.perf_counter() - t0)
    return times


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=100_000)
    parser.add_argument("--dim", type=int, default=1024)
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    matrix = rng.standard_normal((args.rows, args.dim), dtype=np.float32)
    matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
    query = rng.standard_normal(args.dim, dtype=np.float32)
    query /= np.linalg.norm(query)

    kernels = available_kernels()
    if not NUMBA_AVAILABLE:
        print("numba not importable; benchmarking the numpy path only")

    print(f"rows={args.rows} dim={args.dim} repeats={args.repeats}")
    print(f"{'kernel':<8} {'median ms':>10} {'min ms':>10} {'GFLOP/s':>9}")
    medians = {}
    results = {}
    flops = 2.0 * args.rows * args.dim
    for name, fn in sorted(kernels.items()):
        times = time_kernel(fn, matrix, query, args.repeats)
        median = sorted(times)[len(times) // 2]
        medians[name] = median
        results[name] = fn(matrix, query)
        print(f"{name:<8} {median * 1000:>10.2f} {min(times) * 1000:>10.2f} {flops / median / 1e9:>9.2f}")

    if len(results) == 2:
        diff = float(np.abs(results["numba"] - results["numpy"]).max())
        print(f"max |numba - numpy| = {diff:.3e}")
        ratio = medians["numpy"] / medians["numba"]
        print(f"numba speedup over numpy: {ratio:.2f}x")


if __name__ == "__main__":
    main()
