"""Time the numpy and numba variants of each kernel on fixed workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The first numba call compiles (or loads the on-disk cache); it is run
once before timing and reported separately.
"""

import argparse
import time

import numpy as np

from frobrel import kernels
from frobrel._accel import HAVE_NUMBA


def workloads():
    rng = np.random.default_rng(0)
    a = rng.random((400, 400)) < 0.02
    b = rng.random((400, 400)) < 0.02
    M = kernels.unpack_codes(np.arange(1 << 10) >> 2, (2, 2, 2))
    U = kernels.unpack_codes(np.arange(1 << 10) & 3, (2,))
    M3 = rng.random((20000, 3, 3, 3)) < 0.15
    U3 = rng.random((20000, 3)) < 0.4
    L2 = kernels.unpack_codes(np.arange(1 << 16), (2, 2, 2, 2))
    L3 = rng.random((2000, 3, 3, 3, 3)) < 0.05
    masks = rng.integers(1, 1 << 30, size=18).astype(np.int64)
    return [
        ("compose 400x400", "compose", (a, b)),
        ("frob2 flags, all 1024 on n=2", "frob2_flags", (M, U)),
        ("frob2 flags, 20000 random on n=3", "frob2_flags", (M3, U3)),
        ("frob3 flags, all 65536 on n=2", "frob3_flags", (L2,)),
        ("frob3 flags, 2000 random on n=3", "frob3_flags", (L3,)),
        ("clique cover, 18 columns, no hit", "clique_cover", (masks, np.int64(-1), 18)),
    ]


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'workload':36} {'numpy':>10} {'numba':>10} {'first nb':>10} {'speedup':>8}")
    for label, name, xs in workloads():
        t_np = best_of(getattr(kernels, name + "_np"), xs, args.repeat)
        if HAVE_NUMBA:
            nb = getattr(kernels, name + "_nb")
            t0 = time.perf_counter()
            nb(*xs)
            first = time.perf_counter() - t0
            t_nb = best_of(nb, xs, args.repeat)
            print(f"{label:36} {t_np:10.4f} {t_nb:10.4f} {first:10.4f} {t_np / t_nb:8.1f}x")
        else:
            print(f"{label:36} {t_np:10.4f} {'-':>10} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
