#!/usr/bin/env python3
"""Benchmark the jitted streaming kernel against the numpy fallback.

Both backends run the exact same measurement stream (same matrix, same
target, same noise), so besides wall time the table reports the largest
deviation between the two error traces.  Expect agreement near machine
precision; the backends differ only in summation order.

Usage:
    python3 benchmarks/bench_solver.py
    python3 benchmarks/bench_solver.py --sizes 32x64 128x512 --p 5 --repeats 5
"""

import argparse
import time

import numpy as np

from streamista.kernels import NUMBA_AVAILABLE, warmup
from streamista.measurement import gen_gaussian_matrix, gen_noise, measure
from streamista.signals import GenConfig, assemble_target
from streamista.solver import SolverConfig, run_streaming


def build_instance(m, n, n_samples, seed):
    gen = GenConfig(
        n=n,
        s=max(2, n // 16),
        n_pairs=1,
        n_samples=n_samples,
        beta=2.0,
        mu=0.4,
        seed=seed,
    )
    target = assemble_target(gen)
    phi = gen_gaussian_matrix(m, n, seed + 1)
    ys = np.empty((n_samples, m))
    for k in range(n_samples):
        noise = gen_noise(m, 0.05, 0.0, "gaussian_scaled", seed=9000 + k)
        ys[k] = measure(phi, target.samples[k], noise)
    return phi, ys, target


def time_backend(backend, phi, ys, target, cfg, init_u, repeats):
    best = float("inf")
    trace = None
    for _ in range(repeats):
        start = time.perf_counter()
        trace = run_streaming(phi, ys, target, cfg, init_u, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best, trace


def main():
    parser = argparse.ArgumentParser(
        description="compare streaming solver backends (numba jit vs numpy)"
    )
    parser.add_argument(
        "--sizes",
        nargs="+",
        default=["32x64", "64x128", "128x256", "128x512"],
        help="problem sizes as MxN (measurements x coefficients)",
    )
    parser.add_argument("--samples", type=int, default=200, help="measurements per stream")
    parser.add_argument("--p", type=int, default=5, help="iterations per measurement")
    parser.add_argument("--repeats", type=int, default=3, help="report the best of this many runs")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if NUMBA_AVAILABLE:
        print("warming up jit compilation...")
        warmup()
    else:
        print("numba is not importable; only the numpy backend will run")
    print(f"samples={args.samples}  p={args.p}  repeats={args.repeats}\n")

    header = (
        f"{'m x n':>10} {'iters':>7} {'numpy (ms)':>11} {'numba (ms)':>11}"
        f" {'speedup':>8} {'max |diff|':>11}"
    )
    print(header)
    print("-" * len(header))

    for size in args.sizes:
        m, n = (int(v) for v in size.lower().split("x"))
        phi, ys, target = build_instance(m, n, args.samples, args.seed)
        cfg = SolverConfig(lam=0.06, eta=0.3, P=args.p)
        init_u = np.zeros(n)
        iters = args.samples * args.p

        t_np, trace_np = time_backend("numpy", phi, ys, target, cfg, init_u, args.repeats)
        if not NUMBA_AVAILABLE:
            print(f"{size:>10} {iters:>7} {t_np * 1e3:>11.2f} {'-':>11} {'-':>8} {'-':>11}")
            continue
        t_nb, trace_nb = time_backend("numba", phi, ys, target, cfg, init_u, args.repeats)
        diff = float(np.max(np.abs(trace_np.errors - trace_nb.errors)))
        print(
            f"{size:>10} {iters:>7} {t_np * 1e3:>11.2f} {t_nb * 1e3:>11.2f}"
            f" {t_np / t_nb:>7.2f}x {diff:>11.2e}"
        )


if __name__ == "__main__":
    main()
