#!/usr/bin/env python3
"""Compare the numpy and numba kernel backends.

Times the digraph prefilter over a block of 5-vertex masks and the
decompose/recompose identity scan. The numba path pays a one-off JIT
compilation, so each kernel is warmed up before timing.

Run:  python3 benchmarks/bench_kernels.py [--masks 4194304] [--max-den 4000]
"""

import argparse
import time

import numpy as np

from homstruct._kernels import available_backends, roundtrip_scan, stage_codes


def time_call(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--masks", type=int, default=1 << 22, help="5-vertex masks to filter")
    parser.add_argument("--max-den", type=int, default=4000, help="roundtrip denominator bound")
    args = parser.parse_args()

    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    masks = np.arange(args.masks, dtype=np.int64)

    rows = []
    for backend in backends:
        stage_codes(masks[:1024], 5, backend=backend)  # warmup / JIT
        roundtrip_scan(50, backend=backend)
        t_filter = time_call(lambda: stage_codes(masks, 5, backend=backend))
        t_round = time_call(lambda: roundtrip_scan(args.max_den, backend=backend))
        rows.append((backend, t_filter, t_round))

    print(f"{'backend':<8} {'prefilter':>12} {'roundtrip':>12}")
    for backend, t_filter, t_round in rows:
        print(f"{backend:<8} {t_filter:>11.3f}s {t_round:>11.3f}s")
    if len(rows) == 2:
        print(
            f"numba speedup: prefilter x{rows[1][1] / rows[0][1]:.1f}, "
            f"roundtrip x{rows[1][2] / rows[0][2]:.1f}"
        )


if __name__ == "__main__":
    main()
