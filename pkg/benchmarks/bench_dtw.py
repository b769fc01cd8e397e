"""Time the compiled DTW kernel against the numpy fallback.

    python benchmarks/bench_dtw.py --sizes 250 500 1000 2000 --features 3
"""

import argparse
import time

import numpy as np

from motor_tp import _kernels


def best_of(fn, x, y, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(x, y)
        times.append(time.perf_counter() - start)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[250, 500, 1000, 2000])
    parser.add_argument("--features", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    compiled = _kernels.dtw_path_compiled
    if compiled is None:
        print("compiled kernel not available; timing the fallback only")
    rng = np.random.default_rng(args.seed)
    print(f"{'T':>6} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}  identical")
    for T in args.sizes:
        x = rng.normal(size=(T, args.features))
        y = rng.normal(size=(int(T * 1.1), args.features))
        t_py, (c_py, p_py) = best_of(_kernels.dtw_path_python, x, y, args.repeat)
        if compiled is None:
            print(f"{T:>6} {t_py:>11.4f} {'-':>11} {'-':>8}  -")
            continue
        t_cy, (c_cy, p_cy) = best_of(compiled, x, y, args.repeat)
        same = c_py == c_cy and np.array_equal(p_py, p_cy)
        print(f"{T:>6} {t_py:>11.4f} {t_cy:>11.4f} {t_py / t_cy:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
