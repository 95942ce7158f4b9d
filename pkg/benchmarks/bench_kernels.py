"""Numba vs numpy timings for the integer batch kernels.

    python3 benchmarks/bench_kernels.py --sizes 1000 10000 100000
"""

import argparse
import os
import time

import numpy as np

from bellscope import kernels
from bellscope.catalog import full_catalog
from bellscope.sampling import integer_coefficients, ns_vertex_matrix, sample_general, sample_weights


def best_of(f, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        f()
        times.append(time.perf_counter() - t0)
    return min(times)


def run(n, repeat, rng):
    C, _ = integer_coefficients(full_catalog())
    g = sample_general(n, rng)
    w = sample_weights(n, 24, rng)
    V = ns_vertex_matrix()
    cases = {
        "eval": lambda: kernels.eval_batch(C, g.nums),
        "project": lambda: kernels.project_batch(g.nums),
        "ns_gap": lambda: kernels.ns_gap_batch(g.nums),
        "mix": lambda: kernels.mix_batch(w, V),
    }
    rows = []
    for name, f in cases.items():
        os.environ.pop("BELLSCOPE_DISABLE_NUMBA", None)
        ref = f()  # also triggers compilation
        t_nb = best_of(f, repeat)
        os.environ["BELLSCOPE_DISABLE_NUMBA"] = "1"
        assert np.array_equal(ref, f())
        t_np = best_of(f, repeat)
        os.environ.pop("BELLSCOPE_DISABLE_NUMBA", None)
        rows.append((name, n, t_nb, t_np))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 10000, 100000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not kernels.numba_enabled():
        print("numba unavailable or disabled; only numpy timings are meaningful")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<8} {'n':>8} {'numba ms':>10} {'numpy ms':>10} {'ratio':>7}")
    for n in args.sizes:
        for name, size, t_nb, t_np in run(n, args.repeat, rng):
            print(f"{name:<8} {size:>8} {1e3 * t_nb:>10.3f} {1e3 * t_np:>10.3f} {t_np / t_nb:>7.2f}")


if __name__ == "__main__":
    main()
