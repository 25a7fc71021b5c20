"""Compare the compiled refinement kernel against the pure-Python fallback.

    python3 benchmarks/bench_refine.py [--sizes 1000 10000 50000] [--repeat 3]
"""

import argparse
import random
import time

from conetype import kernels
from conetype._refine_py import refine as python_refine


def random_graph(rng, n, max_out):
    """A chain-like graph that needs many refinement rounds, plus random extra edges."""
    edges = [(q, q + 1, 0) for q in range(n - 1)]
    for q in range(n):
        for _ in range(rng.randint(0, max_out)):
            edges.append((q, rng.randrange(n), 0))
    return kernels.csr(n, edges)


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[1000, 10000, 50000])
    parser.add_argument("--max-out", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    opts = parser.parse_args()

    if kernels.compiled_refine is None:
        print("compiled kernel not built; run `python3 setup.py build_ext --inplace` first")
    rng = random.Random(opts.seed)
    print(f"{'states':>8} {'edges':>8} {'rounds':>7} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in opts.sizes:
        ptr, dst, color = random_graph(rng, n, opts.max_out)
        args = (n, ptr, dst, color, [0] * n, (n + 1) ** 2)
        t_py, res_py = best_of(python_refine, args, opts.repeat)
        if kernels.compiled_refine is None:
            print(f"{n:>8} {len(dst):>8} {res_py[1]:>7} {t_py:>10.3f} {'-':>10} {'-':>8}")
            continue
        t_c, res_c = best_of(kernels.compiled_refine, args, opts.repeat)
        assert res_c == res_py, "backends disagree"
        print(f"{n:>8} {len(dst):>8} {res_py[1]:>7} {t_py:>10.3f} {t_c:>10.3f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
