"""Compare the compiled ring kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from groundzx import kernels


def ring_operands(rng, n, hi=1000):
    a = rng.integers(-hi, hi, size=(n, n, 4), dtype=np.int64)
    b = rng.integers(-hi, hi, size=(n, n, 4), dtype=np.int64)
    return a, b


def best_of(fn, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--sizes", type=int, nargs="+", default=[4, 16, 64, 128])
    args = p.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"compiled kernels: {'available' if kernels.BACKEND == 'cython' else 'not built'}")
    print(f"{'n':>5}  {'fallback':>12}  {'compiled':>12}  {'speedup':>8}")
    for n in args.sizes:
        a, b = ring_operands(rng, n)
        slow = best_of(lambda: kernels.ring_matmul(a, b, use_compiled=False), args.repeat)
        if kernels.BACKEND == "cython":
            assert np.array_equal(kernels.ring_matmul(a, b), kernels.ring_matmul(a, b, use_compiled=False))
            fast = best_of(lambda: kernels.ring_matmul(a, b), args.repeat)
            print(f"{n:>5}  {slow * 1e3:>10.3f}ms  {fast * 1e3:>10.3f}ms  {slow / fast:>7.1f}x")
        else:
            print(f"{n:>5}  {slow * 1e3:>10.3f}ms  {'-':>12}  {'-':>8}")


if __name__ == "__main__":
    main()
