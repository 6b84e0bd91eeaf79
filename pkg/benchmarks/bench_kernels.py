#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--repeats 5]

Reports wall time per call for each backend on representative workloads:
the detector split scan over a growing window, a full detector run, the
Lance-Williams agglomeration, and the chain solver.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rclustering._kernels import numpy_impl

try:
    from rclustering._kernels import _speedups
except ImportError:
    _speedups = None


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def detector_run(impl, X):
    """Whole-stream exact detector loop using one backend's scan."""
    T, k = X.shape
    cum = np.zeros((T + 1, k))
    np.cumsum(X, axis=0, out=cum[1:])
    start = 0
    detections = 0
    for end in range(1, T + 1):
        while True:
            cut = impl.adwin_scan(cum, start, end, 2, 0.05, 5)
            if cut == 0:
                break
            start += cut
            detections += 1
    return detections


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    rows = []

    # detector scan on one large window
    X = rng.normal(size=(2000, 8)) * 0.1
    cum = np.vstack([np.zeros(8), np.cumsum(X, axis=0)])
    rows.append(("adwin_scan W=2000 k=8", lambda impl: impl.adwin_scan(cum, 0, 2000, 2, 0.05, 5)))

    # full detector pass over a stationary stream
    rows.append(("detector run T=2000 k=8", lambda impl: detector_run(impl, X)))

    # agglomeration of 300 frames
    Y = rng.normal(size=(300, 16))
    sq = ((Y[:, None, :] - Y[None, :, :]) ** 2).sum(axis=2)
    rows.append(("lw_linkage n=300 (ward)", lambda impl: impl.lw_linkage(sq, numpy_impl.WARD)))

    # chain solve on a long stream with a wide label set
    unary = rng.random((5000, 24))
    w = rng.random(4999)
    rows.append(("chain_solve T=5000 L=24", lambda impl: impl.chain_solve_r1(unary, w)))

    backends = [("numpy", numpy_impl)]
    if _speedups is not None:
        backends.append(("compiled", _speedups))
    else:
        print("compiled speedups not built; timing the NumPy fallback only\n")

    width = max(len(name) for name, _ in rows)
    header = f"{'workload':<{width}}  " + "  ".join(f"{n:>12}" for n, _ in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, fn in rows:
        times = [timeit(lambda impl=impl: fn(impl), args.repeats) for _, impl in backends]
        line = f"{name:<{width}}  " + "  ".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            line += f"  {times[0] / times[1]:>8.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
