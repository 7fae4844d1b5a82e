"""Benchmark the enumeration kernels: compiled C core vs NumPy fallback.

Builds the count table for rotated-surface codes of growing size with both
implementations, checks they agree exactly, and prints a timing table.

    python benchmarks/bench_enumeration.py [--max-l 5] [--repeats 3]
"""

import argparse
import time

import numpy as np

from compasscoh import build_code, family_rotated_surface
from compasscoh._kernels import fallback

try:
    from compasscoh._kernels import _enum_core
except ImportError:
    _enum_core = None


def bench(fn, n, masks, xbar, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(n, masks, xbar)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-l", type=int, default=5,
                        help="largest (odd) rotated-surface size, n = l*l <= 25")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"{'code':>8} {'n':>3} {'2^n':>12} {'fallback':>12} "
          f"{'compiled':>12} {'speedup':>8}")
    for l in range(1, args.max_l + 1, 2):
        code = build_code(family_rotated_surface(l))
        masks = [s.mask for s in code.x_stabilizers]
        xbar = code.logical_x.mask
        t_fb, table_fb = bench(fallback.count_table, code.n, masks, xbar,
                               args.repeats)
        if _enum_core is None:
            print(f"rsc l={l:>2} {code.n:>3} {1 << code.n:>12} {t_fb:>11.4f}s"
                  f" {'(no C kernel)':>12}")
            continue
        t_c, table_c = bench(_enum_core.count_table, code.n, masks, xbar,
                             args.repeats)
        assert np.array_equal(table_fb, table_c), "kernel mismatch"
        print(f"rsc l={l:>2} {code.n:>3} {1 << code.n:>12} {t_fb:>11.4f}s "
              f"{t_c:>11.4f}s {t_fb / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
