"""Benchmark the Jacobi eigensolver kernels: compiled core vs pure Python.

Usage: python benchmarks/bench_eig.py [--repeats N]

Times herm_eig on random Hermitian matrices across dimensions for
whichever kernels are available, with numpy's LAPACK eigh shown as a
reference point, then times one end-to-end relation evaluation per
backend (the campaign hot path).
"""

import argparse
import time

import numpy as np

from qir import backend, linalg
from qir.relations import check_combined_ur
from qir.states import haar_random_pure, random_basis


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eig(repeats):
    rng = np.random.default_rng(1)
    dims = (2, 4, 8, 16, 32, 64)
    names = list(backend.available_backends())
    print(f"herm_eig, best of {repeats} (microseconds per call)")
    header = f"{'dim':>4} " + "".join(f"{name:>12}" for name in names) + f"{'lapack':>12}"
    print(header)
    active = backend.backend_name()
    try:
        for n in dims:
            z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            m = (z + z.conj().T) / 2
            row = f"{n:>4} "
            for name in names:
                backend.set_backend(name)
                linalg.herm_eig(m)  # warm up
                row += f"{_time(lambda: linalg.herm_eig(m), repeats) * 1e6:>12.1f}"
            row += f"{_time(lambda: np.linalg.eigh(m), repeats) * 1e6:>12.1f}"
            print(row)
    finally:
        backend.set_backend(active)


def bench_relation(repeats):
    state = haar_random_pure(4, 3, 5)
    x = random_basis(4, 6)
    y = random_basis(4, 7)
    names = list(backend.available_backends())
    print(f"\ncheck_combined_ur at dims (4, 3), best of {repeats} (milliseconds)")
    active = backend.backend_name()
    try:
        for name in names:
            backend.set_backend(name)
            check_combined_ur(x, y, state)  # warm up
            dt = _time(lambda: check_combined_ur(x, y, state), repeats)
            print(f"{name:>10}: {dt * 1e3:.2f}")
    finally:
        backend.set_backend(active)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()
    print(f"available backends: {', '.join(backend.available_backends())}")
    bench_eig(args.repeats)
    bench_relation(args.repeats)


if __name__ == "__main__":
    main()
