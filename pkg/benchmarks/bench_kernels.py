"""Time the hot pressure kernels: numba @njit path vs pure numpy.

Run from the repo root:

    python3 benchmarks/bench_kernels.py [--points 200] [--repeats 5]

The numba path pays a one-off JIT cost on first call; a warmup call is
timed separately so the table shows steady-state throughput.
"""

import argparse
import os
import time

import numpy as np

from minresist.backend import numba_available
from minresist.kernels import gauss_pressure, gauss_pressure_slope


def _best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(points, repeats):
    u = np.geomspace(1e-3, 40.0, points)
    cases = [(d, V) for d in (2, 3) for V in (1.0, 50.0)]
    backends = ["numpy"] + (["numba"] if numba_available() else [])

    rows = []
    for backend in backends:
        os.environ["MINRESIST_BACKEND"] = backend
        for d, V in cases:
            def run():
                gauss_pressure(d, u, V, 1)
                gauss_pressure(d, u, V, -1)
                gauss_pressure_slope(d, u, V, 1)
                gauss_pressure_slope(d, u, V, -1)
            if backend == "numba":
                t0 = time.perf_counter()
                run()  # JIT warmup
                warm = time.perf_counter() - t0
            else:
                warm = None
            rows.append((backend, d, V, _best_of(run, repeats), warm))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rows = bench(args.points, args.repeats)
    print(f"{args.points} slope points, best of {args.repeats}, "
          f"4 curve evaluations per run")
    print(f"{'backend':>8} {'d':>2} {'V':>5} {'ms':>9} {'note':>14}")
    base = {}
    for backend, d, V, dt, warm in rows:
        note = ""
        if backend == "numpy":
            base[(d, V)] = dt
        elif (d, V) in base:
            note = f"{base[(d, V)] / dt:.2f}x vs numpy"
        print(f"{backend:>8} {d:>2} {V:>5.1f} {dt * 1e3:>9.2f} {note:>14}")
    if not numba_available():
        print("numba not importable; numpy path only")


if __name__ == "__main__":
    main()
