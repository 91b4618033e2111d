"""Time the numba and numpy kernels side by side.

    python3 benchmarks/bench_kernels.py [--max-a 30] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from dihedra import _kernels
from dihedra.cyclo import _power_table


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-a", type=int, default=30)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    impls = {"numpy": _kernels.numpy_impl}
    if _kernels.numba_impl is not None:
        impls["numba"] = _kernels.numba_impl
        # compile outside the timed region
        _kernels.numba_impl.reduced_count_cube(4)
        table, _ = _power_table(12)
        z = np.zeros(table.shape[1], dtype=np.int64)
        _kernels.numba_impl.polymulmod(z, z, table, 12)

    rng = np.random.default_rng(0)
    table, _ = _power_table(210)
    d = table.shape[1]
    pairs = [(rng.integers(-9, 10, d), rng.integers(-9, 10, d)) for _ in range(2000)]

    print(f"{'kernel':<28}{'backend':<8}{'seconds':>10}")
    results = {}
    for name, impl in impls.items():
        cube = best_of(lambda: impl.reduced_count_cube(args.max_a), args.repeat)
        mul = best_of(lambda: [impl.polymulmod(a, b, table, 210) for a, b in pairs], args.repeat)
        results[name] = (cube, mul)
        print(f"{f'reduced_count_cube({args.max_a})':<28}{name:<8}{cube:>10.4f}")
        print(f"{'polymulmod x2000 (n=210)':<28}{name:<8}{mul:>10.4f}")
    if len(results) == 2:
        (c0, m0), (c1, m1) = results["numpy"], results["numba"]
        print(f"speedup numba/numpy: cube {c0 / c1:.1f}x, polymulmod {m0 / m1:.1f}x")


if __name__ == "__main__":
    main()
