"""Benchmark the compiled kernels against the NumPy fallback.

Run:  python benchmarks/bench_kernels.py [--reps 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rvengine._kernels import _fallback

try:
    from rvengine._kernels import _core
except ImportError:
    _core = None


def _time(fn, *args, reps=5):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(name, core_fn, fb_fn, args, reps, check=None):
    fb_t, fb_out = _time(fb_fn, *args, reps=reps)
    if core_fn is None:
        print(f"{name:34s} python {fb_t * 1e3:9.2f} ms   (extension not built)")
        return
    c_t, c_out = _time(core_fn, *args, reps=reps)
    if check is not None:
        check(c_out, fb_out)
    print(f"{name:34s} cython {c_t * 1e3:9.2f} ms   python {fb_t * 1e3:9.2f} ms   "
          f"speedup {fb_t / c_t:6.1f}x")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()
    reps = args.reps
    rng = np.random.default_rng(0)

    # outlier detection over a busy tick day
    n = 300_000
    prices = 100 * np.exp(np.cumsum(rng.standard_normal(n)) * 5e-5)
    prices[rng.integers(0, n, 300)] *= 1.03
    bench(
        "outlier mask (300k ticks, k=60)",
        _core.bg_outlier_mask if _core else None,
        _fallback.bg_outlier_mask,
        (prices, 60, 0.1, 0.06),
        reps,
        check=lambda a, b: np.testing.assert_array_equal(a, b),
    )

    # previous-tick fill onto the 1-second session grid
    tick_t = np.sort(rng.choice(np.arange(34_200_000, 57_900_000), 100_000, replace=False)).astype(np.int64)
    tick_p = rng.uniform(90, 110, tick_t.size)
    grid = np.arange(34_200_000, 57_900_001, 1000, dtype=np.int64)
    bench(
        "previous-tick fill (100k -> 23.7k)",
        _core.previous_tick_fill if _core else None,
        _fallback.previous_tick_fill,
        (tick_t, tick_p, grid),
        reps,
        check=lambda a, b: np.testing.assert_array_equal(a, b),
    )

    # conditional-mean recursion, the QML inner loop
    y = rng.gamma(4.0, 5.0, 3000) + 0.1
    yneg = np.where(rng.random(3000) < 0.5, y, 0.0)
    rec_args = (0.5, 0.4, -0.1, 0.55, 0.02, y, yneg, 20.0, float(y.mean()), float(y.mean()) / 2)
    bench(
        "mem recursion (T=3000)",
        _core.mem_recursion if _core else None,
        _fallback.mem_recursion,
        rec_args,
        reps,
        check=lambda a, b: np.testing.assert_array_equal(a, b),
    )
    d0 = np.zeros(5)
    bench(
        "mem recursion + gradient (T=3000)",
        (lambda *a: _core.mem_recursion_grad(*a)) if _core else None,
        lambda *a: _fallback.mem_recursion_grad(*a),
        (*rec_args, d0),
        reps,
        check=lambda a, b: np.testing.assert_allclose(a[1], b[1], rtol=1e-12),
    )


if __name__ == "__main__":
    main()
