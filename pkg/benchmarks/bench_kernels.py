#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure-Python fallback.

Runs the two hot kernels in isolation (compensated summation and batched
GK15 panel evaluation) and one end-to-end workload (the oscillatory
improper HK integral) under each backend.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import time

import numpy as np

from kspaces import kernels
from kspaces.gauge import Interval, hk_integrate


def _time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_neumaier(repeat):
    rng = np.random.default_rng(42)
    xs = rng.normal(size=2_000_000)
    out = {}
    for backend in kernels.available_backends():
        kernels.force_backend(backend)
        out[backend] = _time(lambda: kernels.neumaier_sum(xs), repeat)
    return "neumaier_sum (2e6 terms)", out


def bench_gk15(repeat):
    rng = np.random.default_rng(42)
    fv = rng.normal(size=(200_000, 15))
    hw = rng.uniform(1e-6, 1e-3, size=200_000)
    out = {}
    for backend in kernels.available_backends():
        kernels.force_backend(backend)
        out[backend] = _time(lambda: kernels.gk15_batch(fv, hw), repeat)
    return "gk15_batch (2e5 panels)", out


def bench_oscillatory(repeat):
    def f(x):
        return 2.0 * x * np.sin(1.0 / x**2) - (2.0 / x) * np.cos(1.0 / x**2)

    def run():
        r = hk_integrate(f, Interval(0.0, 1.0), tol=1e-3, singular_points=[0.0])
        assert abs(r.value - math.sin(1.0)) < 1e-3

    out = {}
    for backend in kernels.available_backends():
        kernels.force_backend(backend)
        out[backend] = _time(run, repeat)
    return "hk_integrate oscillatory improper", out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    default = kernels.backend_name()
    print(f"backends available: {kernels.available_backends()} (default: {default})")
    benches = [bench_neumaier, bench_gk15, bench_oscillatory]
    rows = []
    for bench in benches:
        name, timings = bench(args.repeat)
        rows.append((name, timings))
    kernels.force_backend(default)

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  " + "  ".join(f"{b:>12}" for b in sorted(rows[0][1])))
    for name, timings in rows:
        cells = "  ".join(f"{timings[b] * 1000:>10.2f}ms" for b in sorted(timings))
        print(f"{name:<{width}}  {cells}")
    if "cython" in rows[0][1]:
        for name, timings in rows:
            if "python" in timings and timings["cython"] > 0:
                print(f"{name}: python/cython = {timings['python'] / timings['cython']:.2f}x")


if __name__ == "__main__":
    main()
