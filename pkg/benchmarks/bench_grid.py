#!/usr/bin/env python3
"""Benchmark the numba fast path against the pure-numpy fallback.

Times the hot array kernels (corrugation/mixed grid fills and front-field
synthesis) at several grid sizes and prints per-point throughput plus the
speedup.  The first numba call includes JIT compilation and is excluded by
a warmup round.

Usage: python3 benchmarks/bench_grid.py [--repeat 5]
"""

import argparse
import os
import time

import numpy as np

os.environ.setdefault("CRACKWAVE_ACCEL", "auto")

from crackwave import _accel  # noqa: E402


def grid_points(n_side):
    re = np.linspace(0.05, 2.0, n_side)
    im = np.linspace(-1.0, 0.25, n_side)
    return (re[None, :] + 1j * im[:, None]).ravel()


def time_call(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_case(name, fn, args, n_points, repeat):
    if not _accel.HAVE_NUMBA:
        print(f"{name:>24}: numba unavailable, skipping comparison")
        return
    os.environ["CRACKWAVE_ACCEL"] = "numba"
    fn(*args)  # warmup / compile
    t_nb = time_call(fn, args, repeat)
    os.environ["CRACKWAVE_ACCEL"] = "numpy"
    fn(*args)  # warmup
    t_np = time_call(fn, args, repeat)
    os.environ["CRACKWAVE_ACCEL"] = "auto"
    print(f"{name:>24}: numba {t_nb * 1e3:8.2f} ms   numpy {t_np * 1e3:8.2f} ms   "
          f"speedup {t_np / t_nb:5.2f}x   ({n_points} pts)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    cs = np.array([1.0, -0.7, 0.4, 1.3, 2.0])
    ds = np.array([0.5, 0.2, -0.9, 0.1, -0.3])
    v0s = np.array([1.2, 0.6, 1.5, 0.9, 0.8])

    for n_side in (128, 512, 1024):
        pts = grid_points(n_side)
        bench_case(
            f"corrugation {n_side}x{n_side}", _accel.corrugation_values,
            (pts, 1.0, 0.5, 1.2, 1.58, 0.02, 0.69), pts.size, args.repeat,
        )
        bench_case(
            f"mixed {n_side}x{n_side}", _accel.mixed_values,
            (pts, 1.0, cs, ds, v0s, 1.58, 0.02, -0.16, 1.8, 1.38, 1.2, 0.9, 0.5, 0.69),
            pts.size, args.repeat,
        )

    x = np.linspace(0.0, 2 * np.pi, 512, endpoint=False)
    times = np.linspace(0.0, 10.0, 256)
    k2s = np.arange(1.0, 9.0)
    amps = (0.5 + 0.1j) ** np.arange(8)
    omegas = 0.7 * k2s - 0.02j
    bench_case("field synth 256x512x8", _accel.synthesize_field,
               (x, times, k2s, amps, omegas), times.size * x.size * k2s.size,
               args.repeat)


if __name__ == "__main__":
    main()
