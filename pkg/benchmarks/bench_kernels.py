#!/usr/bin/env python3
"""Benchmark the compiled pairwise kernels against the NumPy fallback.

Times the writhe and linking double sums on trefoil grids of increasing
resolution and checks that both lanes agree to near machine precision.

Usage:
    python benchmarks/bench_kernels.py [--sizes 256,512,1024,2048]
"""
import argparse
import time

import numpy as np

from curveinv import _kernels_py
from curveinv.curves import make_preset
from curveinv.quadrature import periodic_weights

try:
    from curveinv import _kernels
except ImportError:
    _kernels = None


def _time(fn, *args, repeats=3):
    best = np.inf
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="256,512,1024,2048")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    curve = make_preset("trefoil")
    offset = make_preset("torus_knot", {"p": 2, "q": 3, "R": 2.0, "r": 0.45})

    if _kernels is None:
        print("compiled kernels unavailable; timing the fallback only")

    header = f"{'kernel':>12} {'n':>6} {'numpy [s]':>12} {'compiled [s]':>12} {'speedup':>9} {'agree':>10}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        f, f1 = (np.ascontiguousarray(a) for a in curve.grid_derivatives(n, 1))
        g, g1 = (np.ascontiguousarray(a) for a in offset.grid_derivatives(n, 1))
        w = periodic_weights(n)

        cases = [
            ("writhe_sum", (f, f1, w)),
            ("linking_sum", (f, f1, g, g1, w, w)),
            ("gauss_area", (f, f1, w)),
        ]
        for name, arg in cases:
            py_fn = getattr(_kernels_py, name.replace("gauss_area", "gauss_area_sum"))
            t_py, r_py = _time(py_fn, *arg)
            if _kernels is not None:
                c_fn = getattr(_kernels, name.replace("gauss_area", "gauss_area_sum"))
                t_c, r_c = _time(c_fn, *arg)
                agree = abs(r_c[0] - r_py[0]) / max(abs(r_py[0]), 1.0)
                print(f"{name:>12} {n:>6} {t_py:>12.4f} {t_c:>12.4f} "
                      f"{t_py / t_c:>8.1f}x {agree:>10.1e}")
                assert agree < 1e-10, f"{name} lanes disagree at n={n}"
            else:
                print(f"{name:>12} {n:>6} {t_py:>12.4f} {'-':>12} {'-':>9} {'-':>10}")


if __name__ == "__main__":
    main()
