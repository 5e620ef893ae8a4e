"""Benchmark: compiled vs pure-Python kernels on the closure-solver hot path.

Run as: python benchmarks/bench_kernels.py [--chains N] [--solves N]
"""
from __future__ import annotations

import argparse
import random
import time

from bennett8 import _kernels_py

try:
    from bennett8 import _kernels_cy
except ImportError:
    _kernels_cy = None


def bench_loop_quat(mod, n: int, data) -> float:
    t0 = time.perf_counter()
    for th, ar, _ in data[:n]:
        mod.loop_closure_quat(th, ar)
    return time.perf_counter() - t0


def bench_loop_dq(mod, n: int, data) -> float:
    t0 = time.perf_counter()
    for th, ar, ln in data[:n]:
        mod.loop_closure_dq(th, ar, ln)
    return time.perf_counter() - t0


def bench_solves(backend_env: str, n: int) -> float:
    """Full oracle solves with the kernels module swapped via env flag."""
    import importlib
    import os
    import sys

    saved = os.environ.get("BENNETT8_PURE_PYTHON")
    if backend_env:
        os.environ["BENNETT8_PURE_PYTHON"] = backend_env
    else:
        os.environ.pop("BENNETT8_PURE_PYTHON", None)
    for name in ("bennett8.kernels", "bennett8.oracle"):
        sys.modules.pop(name, None)
    kernels = importlib.import_module("bennett8.kernels")
    oracle = importlib.import_module("bennett8.oracle")

    rng = random.Random(7)
    problems = []
    for _ in range(n):
        alpha = rng.uniform(0.4, 1.4)
        beta = rng.uniform(0.4, 1.4)
        arcs = (alpha, beta, alpha, beta)
        guess = (rng.uniform(-1.5, -0.2), 2.6, 0.8, -2.6)
        problems.append(oracle.LoopProblem(arcs, 0, guess))
    t0 = time.perf_counter()
    for p in problems:
        oracle.solve_loop(p, tol=1e-11)
    dt = time.perf_counter() - t0

    if saved is None:
        os.environ.pop("BENNETT8_PURE_PYTHON", None)
    else:
        os.environ["BENNETT8_PURE_PYTHON"] = saved
    for name in ("bennett8.kernels", "bennett8.oracle"):
        sys.modules.pop(name, None)
    return dt, kernels.BACKEND


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--chains", type=int, default=200_000, help="loop-product evaluations")
    ap.add_argument("--solves", type=int, default=300, help="full Newton closure solves")
    args = ap.parse_args()

    rng = random.Random(3)
    data = [
        (
            [rng.uniform(-3, 3) for _ in range(4)],
            [rng.uniform(0.1, 3) for _ in range(4)],
            [rng.uniform(0, 2) for _ in range(4)],
        )
        for _ in range(min(args.chains, 20_000))
    ]
    reps = max(1, args.chains // len(data))

    rows = []
    for label, mod in (("python", _kernels_py), ("cython", _kernels_cy)):
        if mod is None:
            print(f"{label:>7}: extension not built, skipped")
            continue
        tq = sum(bench_loop_quat(mod, len(data), data) for _ in range(reps))
        td = sum(bench_loop_dq(mod, len(data), data) for _ in range(reps))
        rows.append((label, tq, td))
        n_eval = len(data) * reps
        print(
            f"{label:>7}: {n_eval} spherical loop products in {tq:.3f}s "
            f"({n_eval / tq / 1e6:.2f} M/s); spatial in {td:.3f}s ({n_eval / td / 1e6:.2f} M/s)"
        )
    if len(rows) == 2:
        print(f"speedup: spherical x{rows[0][1] / rows[1][1]:.1f}, spatial x{rows[0][2] / rows[1][2]:.1f}")

    t_py, b_py = bench_solves("1", args.solves)
    print(f"{b_py:>7}: {args.solves} Newton closure solves in {t_py:.3f}s")
    if _kernels_cy is not None:
        t_cy, b_cy = bench_solves("", args.solves)
        print(f"{b_cy:>7}: {args.solves} Newton closure solves in {t_cy:.3f}s")
        print(f"speedup: solves x{t_py / t_cy:.1f}")


if __name__ == "__main__":
    main()
