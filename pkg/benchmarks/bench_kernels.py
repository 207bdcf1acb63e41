"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --trials 100000 --blocks 20 --t 4
"""
import argparse
import time

import numpy as np

from tagree import _pykernels
from tagree.sampler import trial_coefficients

try:
    from tagree import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--blocks", type=int, default=20)
    ap.add_argument("--t", type=int, default=4)
    ap.add_argument("--prime", type=int, default=23)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    coeffs = trial_coefficients(0, 0, args.trials, args.t, args.prime)
    id_w = np.full(args.blocks, 5, dtype=np.int64)
    flip_w = np.zeros(args.blocks, dtype=np.int64)
    threshold = args.prime // 2
    impls = {"numpy": _pykernels}
    if _ckernels is not None:
        impls["cython"] = _ckernels

    print(f"trials={args.trials} blocks={args.blocks} t={args.t} prime={args.prime}")
    results = {}
    for name, impl in impls.items():
        pv, a = best_of(lambda: impl.poly_values(coeffs, args.blocks, args.prime), args.repeat)
        ws, b = best_of(lambda: impl.weighted_sums(coeffs, args.prime, threshold, id_w, flip_w), args.repeat)
        results[name] = (a, b)
        print(f"{name:7s} poly_values {pv * 1e3:8.2f} ms  weighted_sums {ws * 1e3:8.2f} ms")
    if len(results) == 2:
        same = all(np.array_equal(x, y) for x, y in zip(results["numpy"], results["cython"]))
        print(f"outputs identical: {same}")
    else:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
