"""Compare the compiled and pure-Python kernels on the built-in domains.

    python benchmarks/bench_kernels.py [--n 20000] [--repeat 5]

Reports the best wall time per call and the maximum absolute difference
between the two backends.
"""

import argparse
import timeit

import numpy as np

from kobageo import kernels
from kobageo.domain import make_builtin, sample_interior

DOMAINS = [
    ("disk", None),
    ("ball", {"d": 2}),
    ("bidisk", None),
    ("example51", {"eps": 0.4, "n": 8}),
    ("example52", {"eps": 0.35, "delta": 0.7}),
]


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000, help="points per rho batch")
    ap.add_argument("--rays", type=int, default=2000, help="rays per exit-radius batch")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if kernels.BACKEND != "cython":
        raise SystemExit("compiled kernels are not available; build with pip install -e .")
    rng = np.random.default_rng(0)
    print(f"{'domain':<10} {'kernel':<10} {'python s':>10} {'cython s':>10} {'speedup':>8} {'max diff':>10}")
    for name, params in DOMAINS:
        dom = make_builtin(name, params)
        pts = sample_interior(dom, args.n, rng)
        orig = pts[: args.rays]
        dirs = rng.standard_normal(orig.shape) + 1j * rng.standard_normal(orig.shape)
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        cases = {
            "rho": lambda b: kernels.rho_batch(dom, pts, backend=b),
            "exit": lambda b: kernels.exit_radii(dom, orig, dirs, dom.tmax, backend=b),
        }
        for kname, fn in cases.items():
            tp = bench(lambda: fn("python"), args.repeat)
            tc = bench(lambda: fn("cython"), args.repeat)
            diff = float(np.max(np.abs(fn("python") - fn("cython"))))
            print(f"{name:<10} {kname:<10} {tp:>10.4f} {tc:>10.4f} {tp / tc:>8.1f} {diff:>10.2e}")


if __name__ == "__main__":
    main()
