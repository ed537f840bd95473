"""Compare the numba kernels with their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is run once to trigger compilation, then timed as the best of
``--repeat`` runs.  Outputs of the two variants are checked against each
other before timing.
"""

import argparse
import timeit

import numpy as np

from qmeasure import _kernels


def hermitian(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


def hadamard_steps(n):
    h = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    return np.repeat(h[None], n, axis=0)


def cases(rng):
    for n in (16, 64, 128):
        a = hermitian(n, rng)
        yield f"jacobi n={n}", _kernels.jacobi_eigh_numba, _kernels.jacobi_eigh_numpy, (a,), lambda r: r[0]
    for n in (256, 2048):
        f = rng.choice([0.0, 0.5, 1.0, 2.0], size=n)
        sw = np.sqrt(rng.uniform(size=n) / n)
        yield f"min-kernel n={n}", _kernels.min_kernel_numba, _kernels.min_kernel_numpy, (f, sw), lambda r: r
    for horizon in (12, 20):
        steps = hadamard_steps(horizon)
        init = np.array([1, 0], dtype=np.complex128)
        yield (
            f"paths m=2 n={horizon}",
            lambda: _kernels.expand_paths_numba(_kernels.prefix_amplitudes_numba(steps, init, 1), 0, 1, steps, horizon),
            lambda: _kernels.expand_paths_numpy(_kernels.prefix_amplitudes_numpy(steps, init, 1), 0, 1, steps, horizon),
            (),
            lambda r: r,
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':22s} {'numba [s]':>12s} {'numpy [s]':>12s} {'speedup':>9s}")
    for name, fast, slow, call_args, key in cases(rng):
        a, b = key(fast(*call_args)), key(slow(*call_args))
        if not np.allclose(a, b, atol=1e-10):
            raise SystemExit(f"{name}: numba and numpy results disagree")
        t_fast = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
        print(f"{name:22s} {t_fast:12.4f} {t_slow:12.4f} {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
