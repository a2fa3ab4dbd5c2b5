"""Compare the compiled and pure-Python automorphism search kernels.

    python benchmarks/bench_search.py [--repeat N] [--groups D16 heisenberg3 ...]
"""
import argparse
import statistics
import sys
import time

import numpy as np

from autl import kernels
from autl.automorphisms import automorphism_group

DEFAULT_GROUPS = ["Q8", "D16", "C2xQ8", "heisenberg3", "D32", "C4xD8", "semidirect8_8_3", "heisenberg5"]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--groups", nargs="+", default=DEFAULT_GROUPS)
    args = ap.parse_args(argv)

    if kernels.compiled_search is None:
        print("compiled kernel not available; build with `pip install -e . --no-build-isolation`")
        return 1

    from autl.constructions import builtin

    print(f"{'group':<18}{'|G|':>5}{'|Aut|':>8}{'cython (s)':>12}{'python (s)':>12}{'speedup':>9}")
    for name in args.groups:
        G = builtin(name)
        tc, _, ac = best_of(lambda: automorphism_group(G, search=kernels.compiled_search), args.repeat)
        tp, _, ap_ = best_of(lambda: automorphism_group(G, search=kernels.python_search), args.repeat)
        assert np.array_equal(ac.images, ap_.images), name
        print(f"{name:<18}{G.order:>5}{ac.order:>8}{tc:>12.4f}{tp:>12.4f}{tp / tc:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
