"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--max-n 5] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from lelm_lab import kernels
from lelm_lab.apparatus import haar_random


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def campaign(backend, n, trials):
    apps = [haar_random(n, s).U for s in range(trials)]

    def run():
        for U in apps:
            amps = backend.amplitude_table(U, n, 1)
            backend.support_components(amps, 1e-9)

    return run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-n", type=int, default=5)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if kernels.compiled_backend is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    backends = {"python": kernels.python_backend, "cython": kernels.compiled_backend}

    print(f"{'kernel':<28}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for n in range(1, args.max_n + 1):
        U = haar_random(n, 0).U
        t = {name: best_of(lambda b=b: b.amplitude_table(U, n, 1), args.repeat)
             for name, b in backends.items()}
        print(f"{f'amplitude_table n={n}':<28}{t['python'] * 1e3:>14.3f}"
              f"{t['cython'] * 1e3:>14.3f}{t['python'] / t['cython']:>9.1f}x")
    for n in range(1, args.max_n + 1):
        amps = kernels.python_backend.amplitude_table(haar_random(n, 0).U, n, 1)
        t = {name: best_of(lambda b=b: b.support_components(amps, 1e-9), args.repeat)
             for name, b in backends.items()}
        print(f"{f'support_components n={n}':<28}{t['python'] * 1e3:>14.3f}"
              f"{t['cython'] * 1e3:>14.3f}{t['python'] / t['cython']:>9.1f}x")
    for n, trials in ((1, 500), (2, 200), (3, 50)):
        t = {name: best_of(campaign(b, n, trials), 3) for name, b in backends.items()}
        print(f"{f'campaign n={n} x{trials}':<28}{t['python'] * 1e3:>14.3f}"
              f"{t['cython'] * 1e3:>14.3f}{t['python'] / t['cython']:>9.1f}x")
    np.testing.assert_allclose(
        kernels.python_backend.amplitude_table(U, args.max_n, -1),
        kernels.compiled_backend.amplitude_table(U, args.max_n, -1), atol=1e-12)


if __name__ == "__main__":
    main()
