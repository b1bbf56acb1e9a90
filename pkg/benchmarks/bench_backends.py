#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallbacks.

Times the four hot kernels on both backends at a few field sizes and prints
a speedup table.  Run from the repo root:

    python benchmarks/bench_backends.py [--q 3 5 7 9 13] [--repeat 5]
"""

import argparse
import time

import numpy as np

from fqcone import _kernels_numpy as knp
from fqcone.cone import get_cone

try:
    from fqcone import _kernels_numba as knb
except ImportError:
    knb = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_q(q, repeat):
    cc = get_cone(q)
    fctx = cc.fctx
    rng = np.random.default_rng(0)
    f = rng.uniform(-1, 1, cc.size) + 1j * rng.uniform(-1, 1, cc.size)
    add = fctx.dense_add_table()
    mul = fctx.dense_mul_table()
    mul_a = np.ascontiguousarray(mul[1]).astype(np.int32)
    tr = fctx.trace.astype(np.int64)

    cases = {
        "pair_table_complex": lambda k: k.pair_table_complex(cc.coords, f, f, add, q),
        "pair_count": lambda k: k.pair_count(cc.coords, add, q),
        "gradient_eval": lambda k: k.gradient_eval(
            cc.coords, f, knp.pair_table_complex(cc.coords, f, f, add, q), add, q),
        "extension_table": lambda k: k.extension_table(
            cc.coords, f, mul_a, mul, add, tr, fctx.zeta, q),
    }
    rows = []
    for name, call in cases.items():
        t_np = best_of(lambda: call(knp), repeat)
        if knb is not None:
            call(knb)  # warm the JIT outside the timed region
            t_nb = best_of(lambda: call(knb), repeat)
            rows.append((name, t_np, t_nb, t_np / t_nb))
        else:
            rows.append((name, t_np, None, None))
    return cc.size, rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, nargs="+", default=[3, 5, 7, 9, 13])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if knb is None:
        print("numba not available; timing the numpy backend only")
    header = f"{'q':>4} {'|cone|':>7} {'kernel':<20} {'numpy':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for q in args.q:
        size, rows = bench_q(q, args.repeat)
        for name, t_np, t_nb, speed in rows:
            nb = f"{t_nb * 1e3:9.2f}ms" if t_nb is not None else "       --"
            sp = f"{speed:7.1f}x" if speed is not None else "      --"
            print(f"{q:>4} {size:>7} {name:<20} {t_np * 1e3:9.2f}ms {nb} {sp}")


if __name__ == "__main__":
    main()
