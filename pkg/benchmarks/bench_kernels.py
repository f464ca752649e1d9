"""Benchmark the numba kernels against their numpy fallbacks.

Usage: python benchmarks/bench_kernels.py [--size 1024x512] [--repeats 5]

Reports per-kernel wall time for both backends and checks that the
outputs agree.
"""

import argparse
import time

import numpy as np

from wxsynth import kernels
from wxsynth.imgcore import gaussian_kernel1d


def timeit(fn, repeats):
    fn()  # warm-up (jit compile)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", default="1024x512")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    w, h = (int(v) for v in args.size.split("x"))

    if not kernels.NUMBA_AVAILABLE:
        print("numba unavailable (or disabled); nothing to compare")
        return

    rng = np.random.default_rng(0)
    img = rng.random((h, w, 3)).astype(np.float32)
    plane = rng.random((h, w)).astype(np.float32)
    blur_k = gaussian_kernel1d(5.0)
    dy = rng.integers(-4, 5, (h, w))
    dx = rng.integers(-4, 5, (h, w))
    n_blobs = 2000
    xs = rng.uniform(0, w, n_blobs).astype(np.float32)
    ys = rng.uniform(0, h, n_blobs).astype(np.float32)
    radii = rng.uniform(3, 12, n_blobs).astype(np.float32)
    alphas = np.full(n_blobs, 0.3, np.float32)
    n_lines = 1500
    x0 = rng.uniform(0, w, n_lines).astype(np.float32)
    y0 = rng.uniform(0, h, n_lines).astype(np.float32)
    x1 = (x0 + rng.uniform(-20, 20, n_lines)).astype(np.float32)
    y1 = (y0 + rng.uniform(10, 30, n_lines)).astype(np.float32)
    line_alphas = rng.uniform(0.2, 0.3, n_lines).astype(np.float32)
    white = np.ones(3, np.float32)

    cases = [
        (
            f"separable blur ({len(blur_k)} taps)",
            lambda: kernels._convolve_sep2d_jit(plane, blur_k),
            lambda: kernels.convolve_sep2d_numpy(plane, blur_k),
            lambda a, b: np.array_equal(a, b),
        ),
        (
            "glass shuffle (r=4)",
            lambda: kernels._glass_shuffle_jit(img, dy, dx),
            lambda: kernels.glass_shuffle_numpy(img, dy, dx),
            lambda a, b: np.array_equal(a, b),
        ),
        (
            f"blob compositing ({n_blobs} blobs)",
            lambda: kernels._composite_blobs_jit(
                img.copy(), xs, ys, radii, alphas, white, 1.0
            ),
            lambda: kernels.composite_blobs_numpy(
                img.copy(), xs, ys, radii, alphas, white, 1.0
            ),
            lambda a, b: np.allclose(a, b, atol=1e-5),
        ),
        (
            f"line rasterization ({n_lines} lines)",
            lambda: kernels._draw_lines_jit(
                img.copy(), x0, y0, x1, y1, line_alphas, white
            ),
            lambda: kernels.draw_lines_numpy(
                img.copy(), x0, y0, x1, y1, line_alphas, white
            ),
            lambda a, b: np.array_equal(a, b),
        ),
    ]

    print(f"image {w}x{h}, best of {args.repeats}")
    print(f"{'kernel':<34} {'numba':>10} {'numpy':>10} {'speedup':>8}  agree")
    for name, jit_fn, np_fn, agree in cases:
        t_jit = timeit(jit_fn, args.repeats)
        t_np = timeit(np_fn, args.repeats)
        match = agree(jit_fn(), np_fn())
        print(
            f"{name:<34} {t_jit * 1e3:>8.2f}ms {t_np * 1e3:>8.2f}ms "
            f"{t_np / t_jit:>7.1f}x  {match}"
        )


if __name__ == "__main__":
    main()
