"""Time the compiled kernels against the NumPy fallback on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel with both timings, the speedup and the maximum
difference between the two outputs.
"""

from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from nlsasym import kernels
from nlsasym.data import InitialData
from nlsasym.specfun import ASYMPTOTIC_RADIUS, SERIES_RADIUS_STABLE, pc_du0, pc_u0


def pc_case(n: int = 2000):
    a = 0.5 + 0.3j
    rng = np.random.default_rng(0)
    y = (rng.uniform(0, 9, n) * np.exp(1j * rng.uniform(-1.5, 1.5, n))).astype(complex)
    args = (a, pc_u0(a), pc_du0(a), pc_u0(a + 1), pc_du0(a + 1), y, SERIES_RADIUS_STABLE, ASYMPTOTIC_RADIUS, 0,
            1e-12, 500)
    return "pc_env", args


def transfer_case(n_z: int = 64):
    q0 = InitialData("sech", 0.5).sample(half_width=24.0, dx=0.01)
    zs = np.linspace(-4, 4, n_z)
    h = q0.dx
    qm = q0.spline()(q0.xs[:-1] + 0.5 * h)
    return "transfer", (zs, float(q0.xs[0]), h, np.asarray(q0.vals), qm)


def run(repeat: int) -> int:
    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled extension not built; only the NumPy fallback is available", file=sys.stderr)
        return 1
    print(f"{'kernel':10s} {'cython [s]':>12s} {'numpy [s]':>12s} {'speedup':>9s} {'max diff':>10s}")
    for name, args in (pc_case(), transfer_case()):
        outs, best = {}, {}
        for label, mod in impls.items():
            fn = getattr(mod, name)
            outs[label] = fn(*args)
            best[label] = min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))
        diff = float(np.max(np.abs(np.asarray(outs["cython"]) - np.asarray(outs["numpy"]))))
        print(f"{name:10s} {best['cython']:12.4f} {best['numpy']:12.4f} {best['numpy'] / best['cython']:9.1f} "
              f"{diff:10.2e}")
    return 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    sys.exit(run(p.parse_args().repeat))
