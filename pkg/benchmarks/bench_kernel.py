"""Compare the compiled and pure-Python word kernels.

    python3 benchmarks/bench_kernel.py [--words 400] [--repeat 5]

Part one times raw word products and derivatives on fresh kernels (so the
product cache never hits across repeats).  Part two runs the same
end-to-end workload in a subprocess per backend, selected through
SFTWEYL_PURE_PYTHON.
"""
import argparse
import os
import random
import subprocess
import sys
import time

from sftweyl import _kernel_py
from sftweyl.core import letter_code

try:
    from sftweyl import _kernel as _compiled
except ImportError:
    _compiled = None

FORM_PAR = (0, 1, 0)
ORBIT_PAR = (1, 0, 1, 0)
KAPPA = (1, 2, 3, 1)

WORKLOAD = """
import time
from sftweyl.core import DEFAULT_WINDOW as W
from sftweyl.homology import check_dsquared
from sftweyl.kernel import BACKEND
from sftweyl.testing import sig1
from sftweyl.textio import parse_series
sig = sig1()
H = parse_series("h^-1*q[g1] + h^-1*q[g1]*t[th0,1] + h^-1*q[g1]*q[g2]*p[g2]", sig, W)
t = time.perf_counter()
rep = check_dsquared(H, W, W, W)
print(BACKEND, rep.status, rep.message, f"{time.perf_counter() - t:.3f}")
"""


def random_words(n, rng):
    out = []
    for _ in range(n):
        xs = []
        for _ in range(rng.randint(1, 6)):
            if rng.random() < 0.3:
                xs.append(letter_code(0, rng.randrange(3), rng.randint(0, 2)))
            else:
                xs.append(letter_code(rng.choice((1, 2)), rng.randrange(4)))
        word = []
        for x in sorted(xs):
            odd = ORBIT_PAR[(x >> 16) & 0xFFFF] if x >> 32 else FORM_PAR[(x >> 16) & 0xFFFF]
            if odd and word and word[-1] == x:
                continue
            word.append(x)
        out.append(tuple(word))
    return out


def bench(cls, pairs, repeat):
    best = float("inf")
    for _ in range(repeat):
        k = cls(FORM_PAR, ORBIT_PAR, KAPPA)
        t = time.perf_counter()
        for u, v in pairs:
            k.product(u, v)
            if v:
                k.left_derivative(u + v, v[0])
                k.right_derivative(u + v, v[-1])
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--words", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(0)
    ws = random_words(args.words, rng)
    pairs = [(rng.choice(ws), rng.choice(ws)) for _ in range(args.words * 4)]

    py = bench(_kernel_py.WordKernel, pairs, args.repeat)
    print(f"word kernel, {len(pairs)} products: python {py * 1e3:.1f} ms")
    if _compiled is None:
        print("compiled kernel not built; skipping comparison")
    else:
        cy = bench(_compiled.WordKernel, pairs, args.repeat)
        print(f"word kernel, {len(pairs)} products: cython {cy * 1e3:.1f} ms "
              f"(speedup {py / cy:.2f}x)")

    for flag in ("1", ""):
        env = dict(os.environ, SFTWEYL_PURE_PYTHON=flag)
        res = subprocess.run([sys.executable, "-c", WORKLOAD], capture_output=True, text=True,
                             env=env)
        print("D o D on the default window:", res.stdout.strip() or res.stderr.strip())


if __name__ == "__main__":
    main()
