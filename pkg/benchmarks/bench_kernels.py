"""Benchmark the compiled kernel core against the pure numpy/scipy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 5]

Times the four hot kernels on pipeline-shaped workloads and prints a
side-by-side table. The compiled backend is skipped (with a note) when the
extension is not built.
"""

import argparse
import time

import numpy as np

from camsa._kernels import _pure

try:
    from camsa._kernels import _core
except ImportError:
    _core = None


def timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_cases():
    rng = np.random.default_rng(0)

    poly = np.ascontiguousarray(rng.uniform(0, 1000, (8, 2)))
    pts = np.ascontiguousarray(rng.uniform(0, 1000, (200_000, 2)))

    segs = rng.uniform(0, 1, (20_000, 8))

    series = rng.normal(800, 30, 100_000)

    grids = rng.integers(0, 255, (60, 3, 64, 64), dtype=np.uint8)

    def pip(mod):
        mod.points_in_polygon(pts, poly)

    def seg(mod):
        f = mod.segments_intersect
        for row in segs:
            f(*row)

    def med(mod):
        mod.rolling_median(series, 15)

    def diff(mod):
        f = mod.diff_centroid
        for p, c, n in grids:
            f(p, c, n, 25, 4)

    return [
        ("points_in_polygon (200k pts, 8-gon)", pip),
        ("segments_intersect (20k pairs)", seg),
        ("rolling_median (100k, w=15)", med),
        ("three-frame diff (60 triples, 64x64)", diff),
    ]


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"{'kernel':<42} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for name, fn in make_cases():
        t_pure = timeit(lambda: fn(_pure), args.repeat)
        if _core is None:
            print(f"{name:<42} {t_pure * 1e3:>8.1f}ms {'n/a':>10} {'-':>8}")
            continue
        t_core = timeit(lambda: fn(_core), args.repeat)
        print(f"{name:<42} {t_pure * 1e3:>8.1f}ms {t_core * 1e3:>8.1f}ms {t_pure / t_core:>7.1f}x")
    if _core is None:
        print("\ncompiled backend not built; run `python setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
