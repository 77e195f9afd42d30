#!/usr/bin/env python3
"""Time the compiled kernels against the pure-numpy fallback.

Run from the repo root after installing the package:

    python3 benchmarks/bench_backends.py --nouns 2000 --dim 512
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from indiv_probe.kernels import HAVE_NUMBA, consecutive_profile, distance_stack


def timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nouns", type=int, default=2000)
    ap.add_argument("--dim", type=int, default=512)
    ap.add_argument("--quantities", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    vecs = rng.standard_normal((args.nouns, args.quantities, args.dim))
    print(f"stack: {args.nouns} nouns x {args.quantities} quantities x {args.dim} dims")

    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    if not HAVE_NUMBA:
        print("numba not importable; timing the fallback only")

    for name, fn in (("distance_stack", distance_stack),
                     ("consecutive_profile", consecutive_profile)):
        results = {}
        for backend in backends:
            fn(vecs[:8], backend=backend)  # warm up (JIT compile)
            results[backend] = timeit(lambda: fn(vecs, backend=backend), args.repeat)
        line = "  ".join(f"{b}: {results[b] * 1e3:8.2f} ms" for b in backends)
        print(f"{name:22s} {line}")
        if len(results) == 2:
            print(f"{'':22s} numba speedup: {results['numpy'] / results['numba']:.2f}x")


if __name__ == "__main__":
    main()
