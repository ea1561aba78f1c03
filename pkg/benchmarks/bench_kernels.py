"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--n 100000] [--repeat 5]

Both backends are imported directly, so the environment switch does not matter.
Prints one line per kernel with the best-of-repeat time for each and the speedup.
"""
import argparse
import importlib
import timeit

import numpy as np


def workloads(n):
    rng = np.random.default_rng(0)
    mu = rng.uniform(0.01, 0.1, n)
    mu[-1] = 0.0
    d = rng.uniform(-1.0, 1.0, n)
    f = rng.uniform(-1.0, 1.0, n)
    p = np.full(n, -3.0)
    q = np.full(n, 2.0)
    return {
        "first_order_forward": lambda k: k.first_order_forward(mu, d, f, 1.0),
        "second_order_forward": lambda k: k.second_order_forward(mu, p, q, f, 1.0, 1.1),
        "riccati_forward": lambda k: k.riccati_forward(mu, p, q, -1.0, 1e-9),
        "lemma_sup": lambda k: k.lemma_sup(mu, d),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--n", type=int, default=100_000, help="grid points")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = {"python": importlib.import_module("tempus._kernels_py")}
    try:
        backends["cython"] = importlib.import_module("tempus._kernels")
    except ImportError:
        print("compiled extension not built; showing the pure-Python timings only")

    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':<22}" + "".join(f"{b:>12}" for b in backends) + "     speedup")
    for name, run in workloads(args.n).items():
        best = {b: min(timeit.repeat(lambda: run(k), number=1, repeat=args.repeat))
                for b, k in backends.items()}
        line = f"{name:<22}" + "".join(f"{t * 1e3:>10.2f}ms" for t in best.values())
        if "cython" in best:
            line += f"  {best['python'] / best['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
