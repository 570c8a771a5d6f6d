"""Compare the compiled and pure-Python simplex kernels.

    python benchmarks/bench_kernels.py [--problems 2000] [--seed 0]

Both kernels get the same random bounded problems; the script checks that
their answers agree and prints the time per call for each problem size.
"""
from __future__ import annotations

import argparse
import random
import time
from fractions import Fraction

from prpq.oracle import _kernel
from prpq.oracle._simplex_py import solve as solve_py


def random_problem(rng: random.Random, n: int, m: int):
    rows = [[Fraction(rng.randint(-5, 5)) for _ in range(n)] for _ in range(m)]

    lower, upper = [], []
    for _ in range(n + m):
        # an interval per variable, so no call is decided by a trivial bound clash
        lo = Fraction(rng.randint(-20, 20), rng.randint(1, 3))
        hi = lo + rng.randint(0, 10)
        lower.append((lo, Fraction(rng.choice((0, 0, 1)))) if rng.random() < 0.7 else None)
        upper.append((hi, Fraction(rng.choice((0, 0, -1)))) if rng.random() < 0.7 else None)
    return n, rows, lower, upper


def timed(fn, problems) -> tuple[float, list]:
    t0 = time.perf_counter()
    out = [fn(*p) for p in problems]
    return time.perf_counter() - t0, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--problems", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _kernel.solve_c is None:
        print("compiled kernel not available; build with `pip install -e . --no-build-isolation`")
        return
    print(f"{'params':>6} {'rows':>4} {'python us':>10} {'cython us':>10} {'speedup':>8}")
    for n, m in ((2, 2), (3, 6), (4, 10), (6, 16), (8, 24)):
        rng = random.Random(args.seed * 1000 + n)
        problems = [random_problem(rng, n, m) for _ in range(args.problems)]
        tp, rp = timed(solve_py, problems)
        tc, rc = timed(_kernel.solve_c, problems)
        for a, b in zip(rp, rc):
            assert a[0] == b[0] and a[2] == b[2], "kernels disagree"
        per = 1e6 / len(problems)
        print(f"{n:>6} {m:>4} {tp * per:>10.1f} {tc * per:>10.1f} {tp / tc:>7.2f}x")


if __name__ == "__main__":
    main()
