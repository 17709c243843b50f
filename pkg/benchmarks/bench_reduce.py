"""Time the compiled and pure-Python F_p reduction kernels on triangulated grids.

    python benchmarks/bench_reduce.py [--sizes 10 20 40] [--repeat 3]

Also times the full H_1 barcode over F_2 and Z on the ~2000-cell grid.
"""

import argparse
import time

from saecula.homology import homology_barcode
from saecula.reduction import available_backends, reduce_mod_p
from saecula.samples import grid_complex


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 40, 60])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'grid':>8} {'dim':>4} {'columns':>8}" + "".join(f" {b + ' (s)':>14}" for b in backends)
          + ("   speedup" if len(backends) > 1 else ""))
    for k in args.sizes:
        X = grid_complex(k, k, "fp:2", seed=k)
        for m in (1, 2):
            cols = X.boundary_columns(m)
            nrows = len(X.cells_of_dim(m - 1))
            times = {}
            results = {}
            for b in backends:
                times[b] = best_of(lambda: results.__setitem__(b, reduce_mod_p(cols, nrows, 2, True, b)),
                                   args.repeat)
            if len(backends) > 1:
                assert results["python"] == results["cython"], "kernels disagree"
            line = f"{k}x{k:<5} {m:>4} {len(cols):>8}" + "".join(f" {times[b]:>14.4f}" for b in backends)
            if len(backends) > 1:
                line += f"   {times['python'] / max(times['cython'], 1e-9):7.1f}x"
            print(line)

    X = grid_complex(18, 19, "fp:2")
    print(f"\nH_1 barcode, {len(X.cells)} cells:")
    for coeff in ("fp:2", "z"):
        Y = X.with_coefficients(coeff)
        t = best_of(lambda: homology_barcode(Y, 1), 1)
        print(f"  {coeff:<5} {t:8.3f} s")


if __name__ == "__main__":
    main()
