#!/usr/bin/env python3
"""Benchmark the compiled simulation kernels against the pure-Python fallback.

Runs identical workloads through both backends, checks the outcome arrays
are bit-identical, and reports throughput and speedup.

    python3 benchmarks/bench_kernels.py [--trials 200000] [--steps 2000000]
"""

import argparse
import sys
import time

import numpy as np

from polywalk import _kernels_py

try:
    from polywalk import _kernels
except ImportError:
    _kernels = None


def bench_ruin(mod, trials, seed=42):
    duration = np.zeros(trials, np.int64)
    won = np.zeros(trials, np.int8)
    first = np.zeros(trials, np.int8)
    trunc = np.zeros(trials, np.int8)
    started = time.perf_counter()
    mod.ruin_fill(20, 40, 0.5, seed, 0, trials, 10**7, duration, won, first, trunc)
    elapsed = time.perf_counter() - started
    return elapsed, int(duration.sum()), (duration, won, first, trunc)


def bench_polygon(mod, trials, seed=42):
    cover = np.zeros(trials, np.int64)
    last = np.zeros(trials, np.int64)
    ret = np.zeros(trials, np.int64)
    covered = np.zeros(trials, np.int8)
    trunc = np.zeros(trials, np.int8)
    started = time.perf_counter()
    mod.polygon_fill(10, 0.5, seed, 0, trials, 10**7, cover, last, ret, covered, trunc)
    elapsed = time.perf_counter() - started
    return elapsed, int(cover.sum() + ret.sum()), (cover, last, ret, covered, trunc)


def bench_occupancy(mod, steps, seed=42):
    counts = np.zeros(11, np.int64)
    started = time.perf_counter()
    mod.occupancy_fill(10, 0.5, seed, steps, counts)
    elapsed = time.perf_counter() - started
    return elapsed, steps, (counts,)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--steps", type=int, default=2_000_000)
    args = parser.parse_args(argv)

    workloads = [
        ("ruin 20:40 fair", bench_ruin, args.trials),
        ("polygon m=10 fair", bench_polygon, args.trials),
        ("occupancy m=10 fair", bench_occupancy, args.steps),
    ]

    print(f"{'workload':<22} {'python':>10} {'compiled':>10} {'steps/s (py)':>14} "
          f"{'steps/s (ext)':>14} {'speedup':>8}")
    for name, fn, size in workloads:
        py_time, steps, py_out = fn(_kernels_py, size)
        if _kernels is None:
            print(f"{name:<22} {py_time:>9.2f}s {'-':>10} {steps / py_time:>14.3g} "
                  f"{'-':>14} {'-':>8}")
            continue
        ext_time, ext_steps, ext_out = fn(_kernels, size)
        for a, b in zip(py_out, ext_out):
            if not np.array_equal(a, b):
                print(f"ERROR: {name}: backends disagree", file=sys.stderr)
                return 1
        print(f"{name:<22} {py_time:>9.2f}s {ext_time:>9.2f}s {steps / py_time:>14.3g} "
              f"{ext_steps / ext_time:>14.3g} {py_time / ext_time:>7.1f}x")
    if _kernels is None:
        print("\ncompiled kernels not built; install Cython and reinstall to compare")
    else:
        print("\nbackends produced bit-identical outcomes on every workload")
    return 0


if __name__ == "__main__":
    sys.exit(main())
