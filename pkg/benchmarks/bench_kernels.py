"""Time the MPFR extension against the pure-mpmath kernels.

    python benchmarks/bench_kernels.py [--nodes 600] [--degree 24] [--prec 256] [--repeat 3]

Each kernel is fed identical inputs from both backends; the last column
is the largest relative difference between their outputs.  ``--e2e``
additionally times a full build_system + aux_quantities in two
subprocesses, one with FH_GAUSS_PURE=1.
"""

import argparse
import os
import random
import subprocess
import sys
import time

from mpmath import mp, mpf

from fh_gauss.kernels import backend_module

E2E = ("from fh_gauss import WeightSpec, build_system, aux_quantities, BACKEND;"
       "import time; t=time.perf_counter();"
       "s=build_system(WeightSpec((-0.6,0.8),(0.5,1.5)),12); aux_quantities(s);"
       "print(BACKEND, time.perf_counter()-t)")


def inputs(n, prec, seed=1):
    rng = random.Random(seed)
    with mp.workprec(prec):
        xs = sorted(mpf(rng.uniform(-6, 6)) for _ in range(n))
        ws = [mp.exp(-x * x) for x in xs]
    return xs, ws


def flatten(v):
    if isinstance(v, (list, tuple)):
        return [y for x in v for y in flatten(x)]
    return [v]


def max_rel(a, b):
    # relative to the largest entry: some outputs vanish by orthogonality
    a, b = flatten(a), flatten(b)
    scale = max(max(abs(y) for y in b), mpf(2) ** -200)
    return max(abs(x - y) for x, y in zip(a, b)) / scale


def best_of(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--nodes", type=int, default=600)
    ap.add_argument("--degree", type=int, default=24)
    ap.add_argument("--prec", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--e2e", action="store_true")
    args = ap.parse_args(argv)

    try:
        fast = backend_module("mpfr")
    except ImportError:
        print("compiled extension not built; run `pip install --no-build-isolation -e .`")
        return 1
    slow = backend_module("python")
    prec, n, deg = args.prec, args.nodes, args.degree
    xs, ws = inputs(n, prec)
    with mp.workprec(prec):
        alpha, h = slow.stieltjes(xs, ws, deg, prec)
        beta = [mpf(0)] + [h[k] / h[k - 1] for k in range(1, deg + 1)]
        guesses = [mp.cos(mp.pi * (i + mpf(3) / 4) / (64 + mpf(1) / 2)) for i in range(64)]
    ts, gs = [mpf("-0.6"), mpf("0.8")], [mpf("0.5"), mpf("1.5")]
    cases = {
        "weight_values": lambda m: m.weight_values(xs, ts, gs, -1, prec),
        "power_sums": lambda m: m.power_sums(xs, ws, 2 * deg, prec),
        "stieltjes": lambda m: m.stieltjes(xs, ws, deg, prec),
        "poly_sums": lambda m: m.poly_sums(xs, ws, alpha, beta, deg, prec),
        "jacobi_newton": lambda m: m.jacobi_newton(mpf("0.5"), mpf("-0.5"), 64, guesses, prec),
    }
    print(f"nodes={n} degree={deg} prec={prec} best of {args.repeat}")
    print(f"{'kernel':<14} {'python s':>10} {'mpfr s':>10} {'speedup':>8} {'max rel diff':>14}")
    for name, fn in cases.items():
        tp, a = best_of(lambda: fn(slow), args.repeat)
        tc, b = best_of(lambda: fn(fast), args.repeat)
        with mp.workprec(prec):
            d = max_rel(b, a)
        print(f"{name:<14} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f} {mp.nstr(d, 3):>14}")

    if args.e2e:
        for pure in ("", "1"):
            env = dict(os.environ, FH_GAUSS_PURE=pure)
            res = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True,
                                 text=True, check=True)
            backend, secs = res.stdout.split()
            print(f"end-to-end N=2, n_max=12 [{backend}]: {float(secs):.2f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
