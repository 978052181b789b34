"""Compare the compiled kernels with their pure-Python twins.

Usage:  python benchmarks/bench_kernels.py [--n 20000] [--repeat 3]

Times the three hot loops on a hydrogen-like problem of n nodes
(Sturm-count bisection for one eigenvalue, one tridiagonal solve, one RK4
shooting pass) and prints the speedup of the compiled version.
"""
import argparse
import timeit

import numpy as np

from sp_soliton import _pykernels

try:
    from sp_soliton import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cases(n: int):
    h = 40.0 / n
    r = h * np.arange(1, n + 1)
    d = 1.0 / h**2 - 1.0 / r
    e = np.full(n - 1, -0.5 / h**2)
    e2 = e * e
    rhs = np.random.default_rng(0).standard_normal(n)
    s_nodes = np.zeros(n + 1)
    s_mid = np.zeros(n)
    return {
        "bisect_eigenvalue": lambda k: k.bisect_eigenvalue(d, e2, 0, -2.0 / h, 0.0, 1e-12),
        "solve_tridiagonal": lambda k: k.solve_tridiagonal(d + 0.5, e, rhs),
        "shoot": lambda k: k.shoot(s_nodes, s_mid, 1.0, h, -0.5, n, True),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"n = {args.n}")
    print(f"{'kernel':<20}{'python [s]':>14}{'compiled [s]':>14}{'speedup':>10}")
    for name, fn in cases(args.n).items():
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{name:<20}{t_py:>14.4f}{'n/a':>14}{'n/a':>10}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:<20}{t_py:>14.4f}{t_c:>14.6f}{t_py / t_c:>9.0f}x")


if __name__ == "__main__":
    main()
