#!/usr/bin/env python3
"""Compare the compiled kernel core against the pure-Python fallback.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import math
import time

import numpy as np

from absnorm import NormSpec, gauge_from_curve
from absnorm import _core_py

try:
    from absnorm import _core
except ImportError:
    _core = None


def specs():
    p1 = NormSpec.p_norm(1)
    pinf = NormSpec.p_norm(math.inf)
    return {
        "p-norm (p=3)": NormSpec.p_norm(3),
        "mixture": NormSpec.mixture(0.3, NormSpec.mixture(0.5, p1, pinf), NormSpec.p_norm(2)),
        "curve gauge": gauge_from_curve([(0, 1), (0.3, 0.96), (0.62, 0.8), (1, 0)]),
    }


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernel(kernel, rng):
    pts = rng.uniform(-2, 2, (2000, 2))
    a = np.ascontiguousarray(pts[:, 0])
    b = np.ascontiguousarray(pts[:, 1])
    big_a = np.ascontiguousarray(rng.uniform(-2, 2, 100_000))
    big_b = np.ascontiguousarray(rng.uniform(-2, 2, 100_000))
    out = np.empty(big_a.size)
    xs = np.ascontiguousarray(np.linspace(-1, 1, 201))
    flo = np.empty(xs.size)
    fhi = np.empty(xs.size)
    return {
        "scalar eval x2000": lambda: [kernel.eval(x, y) for x, y in pts],
        "batch eval 1e5": lambda: kernel.eval_batch(big_a, big_b, out),
        "boundary bracket x200": lambda: [kernel.boundary_bracket(x) for x in xs[:200]],
        "boundary batch 201": lambda: kernel.boundary_batch(xs, flo, fhi),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if _core is None:
        print("compiled core not built (pip install -e . builds it); timing pure only")

    header = f"{'spec':<14} {'operation':<22} {'pure':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, spec in specs().items():
        arrays = spec.plan.arrays
        pure = _core_py.Kernel(*arrays)
        compiled = _core.Kernel(*arrays) if _core is not None else None
        rng = np.random.default_rng(0)
        pure_ops = bench_kernel(pure, rng)
        rng = np.random.default_rng(0)
        comp_ops = bench_kernel(compiled, rng) if compiled else {}
        for op, fn in pure_ops.items():
            t_pure = best_of(args.repeat, fn)
            if compiled:
                t_comp = best_of(args.repeat, comp_ops[op])
                print(f"{name:<14} {op:<22} {t_pure * 1e3:>8.2f}ms {t_comp * 1e3:>8.2f}ms "
                      f"{t_pure / t_comp:>7.1f}x")
            else:
                print(f"{name:<14} {op:<22} {t_pure * 1e3:>8.2f}ms {'n/a':>10} {'':>8}")


if __name__ == "__main__":
    main()
