"""Time each hot kernel through its numba and numpy paths.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from wkbsum import _kernels
from wkbsum.algebra import canonical_table
from wkbsum.contour import ContourPath, turning_points


def best_of(fn, repeat):
    fn()  # warm-up, also triggers compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    E, U = 20.25, 8.75
    z, _ = ContourPath.around(turning_points(E, U)).nodes(1 << 16)
    w2 = E - U / np.cos(z) ** 2
    w0 = 1j * np.sqrt(-w2[0].real)
    w, _ = _kernels.track_branch_numpy(w2, w0)
    coeff, cpow, spow, wpow = canonical_table(8)[8].to_expr().numeric_terms(U, E)
    c, s = np.cos(z), np.sin(z)
    x = np.linspace(1e-3, np.pi / 2, 16000)
    g = U / np.sin(x) ** 2 - E
    h = x[1] - x[0]
    return {
        "track_branch": ((w2, w0), _kernels.track_branch_numpy, _kernels.track_branch_numba),
        "sum_terms": ((coeff, cpow, spow, wpow, c, s, w), _kernels.sum_terms_numpy, _kernels.sum_terms_numba),
        "numerov": ((g, 1e-5, 2e-5, h), _kernels.numerov_numpy, _kernels.numerov_numba),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<14}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, (argv, slow, fast) in cases().items():
        t_np = best_of(lambda: slow(*argv), args.repeat)
        if fast is None:
            print(f"{name:<14}{t_np * 1e3:>12.3f}{'n/a':>12}{'':>10}")
            continue
        t_nb = best_of(lambda: fast(*argv), args.repeat)
        print(f"{name:<14}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
