"""Time the compiled holonomy kernel against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--steps 200] [--repeat 5]

Each row is one polygon evaluation (the unit of work inside the synthesis
objective), best of ``--repeat`` timing runs.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from holoqc import _backend
from holoqc.loops import make_loop
from holoqc.model import System

CASES = [(System.ONE, 3), (System.ONE, 5), (System.TWO, 3), (System.TWO, 5)]


def _time(kernel, pts, steps, repeat):
    kernel(pts, steps, True)
    timer = timeit.Timer(lambda: kernel(pts, steps, True))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200, help="steps per edge")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    compiled = _backend.compiled_polygon_holonomy
    fallback = _backend.python_polygon_holonomy
    if compiled is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'system':<10} {'k':>2} {'steps':>6} {'compiled':>12} {'fallback':>12} {'speedup':>8} {'max |diff|':>11}")
    for system, k in CASES:
        pts = make_loop(system, None, rng.uniform(-np.pi, np.pi, (k, system.dim))).points()
        n = args.steps * (k + 1)
        t_py = _time(fallback, pts, args.steps, args.repeat)
        if compiled is None:
            print(f"{system.value:<10} {k:>2} {n:>6} {'-':>12} {t_py * 1e3:>10.3f}ms {'-':>8} {'-':>11}")
            continue
        t_c = _time(compiled, pts, args.steps, args.repeat)
        diff = np.abs(compiled(pts, args.steps, True) - fallback(pts, args.steps, True)).max()
        print(f"{system.value:<10} {k:>2} {n:>6} {t_c * 1e3:>10.3f}ms {t_py * 1e3:>10.3f}ms {t_py / t_c:>7.1f}x {diff:>11.1e}")


if __name__ == "__main__":
    main()
