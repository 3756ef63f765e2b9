"""Time the GMP kernels against the pure-Python ones on the same inputs.

    python3 benchmarks/bench_kernels.py [--depths 1000 3000] [--repeat 3]

Prints a CSV row per (kernel, depth) with both timings, the speedup and
whether the outputs agree.
"""
import argparse
import csv
import random
import sys
import time

from pcflab import _pykernels
from pcflab.corpus import get
from pcflab.gcd_lab import parse_form
from pcflab.reduction import build_reduced

try:
    from pcflab import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(depth):
    apery = get("apery_zeta3").pcf
    av, bv = apery.values(depth)
    p, q, _ = _pykernels.convergents_raw(av, bv)
    rr = build_reduced(get("table5_fact_over_2n_13").pcf, parse_form("n!/2^n"))
    n1, n2, den = rr.step_arrays(depth)
    rng = random.Random(0)
    u0, u1 = rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6)
    return {
        "convergents_raw": lambda k: k.convergents_raw(av, bv),
        "gcd_sequences": lambda k: k.gcd_sequences(p, q),
        "log_gcd_profile": lambda k: k.log_gcd_profile(av, bv),
        "valuation_table": lambda k: k.valuation_table(q[1:], [2, 3, 5, 7, 11, 13]),
        "reduced_run": lambda k: k.reduced_run(n1, n2, den, u0, u1),
    }


def same(x, y):
    if isinstance(x, float) or isinstance(y, float):
        return abs(x - y) <= 1e-9 * max(1.0, abs(x))
    if isinstance(x, (list, tuple)) and isinstance(y, (list, tuple)):
        return len(x) == len(y) and all(same(a, b) for a, b in zip(x, y))
    return x == y


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depths", type=int, nargs="+", default=[1000, 3000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("GMP extension not built; nothing to compare", file=sys.stderr)
        return 1
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["kernel", "depth", "t_python", "t_gmp", "speedup", "agree"])
    for depth in args.depths:
        for name, fn in cases(depth).items():
            tp, outp = best_of(lambda: fn(_pykernels), args.repeat)
            tc, outc = best_of(lambda: fn(_ckernels), args.repeat)
            w.writerow([name, depth, f"{tp:.4f}", f"{tc:.4f}", f"{tp / tc:.2f}", same(outp, outc)])
    return 0


if __name__ == "__main__":
    sys.exit(main())
