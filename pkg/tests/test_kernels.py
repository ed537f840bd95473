"""The numba kernels and their numpy fallbacks must agree."""

import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from qmeasure import _kernels
from qmeasure.properties import random_unitary
from qmeasure.rng import SplitMix64


def hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


@pytest.mark.parametrize("solver", [_kernels.jacobi_eigh_numba, _kernels.jacobi_eigh_numpy])
@pytest.mark.parametrize("n", [1, 3, 12, 33])
def test_jacobi_variants(solver, n):
    a = hermitian(n, n)
    w, v, sweeps = solver(a)
    scale = np.linalg.norm(a)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-13 * scale)
    np.testing.assert_allclose((v * w) @ v.conj().T, a, atol=1e-13 * scale)
    assert np.all(np.diff(w) >= 0)
    assert 0 <= sweeps <= _kernels.JACOBI_MAX_SWEEPS


def test_jacobi_variants_agree_on_spectrum():
    a = hermitian(20, 7)
    w1 = _kernels.jacobi_eigh_numba(a)[0]
    w2 = _kernels.jacobi_eigh_numpy(a)[0]
    np.testing.assert_allclose(w1, w2, atol=1e-12)


def test_jacobi_real_symmetric_input():
    a = np.array([[2.0, 1, 0], [1, 2, 1], [0, 1, 2]])
    w, _, _ = _kernels.jacobi_eigh_numba(a)
    np.testing.assert_allclose(w, [2 - np.sqrt(2), 2, 2 + np.sqrt(2)], atol=1e-14)


def test_min_kernel_variants():
    rng = np.random.default_rng(0)
    f = rng.choice([0.0, 0.5, 1.0, 2.5], size=17)
    sw = np.sqrt(rng.uniform(0, 1, 17))
    np.testing.assert_allclose(_kernels.min_kernel_numba(f, sw), _kernels.min_kernel_numpy(f, sw), atol=0)
    np.testing.assert_allclose(_kernels.min_kernel_numpy([1, 2], np.sqrt([0.5, 0.5])), [[0.5, 0.5], [0.5, 1.0]])


def brute_amplitudes(steps, psi, horizon):
    m = psi.shape[0]
    out = []
    for path in itertools.product(range(m), repeat=horizon + 1):
        a = psi[path[0]]
        for k in range(1, horizon + 1):
            a *= steps[k - 1][path[k], path[k - 1]]
        out.append(a)
    return np.array(out)


@pytest.mark.parametrize("expand", [_kernels.expand_paths_numba, _kernels.expand_paths_numpy])
@pytest.mark.parametrize("m,horizon,length", [(2, 0, 1), (2, 3, 1), (3, 3, 2), (2, 5, 3), (3, 2, 3)])
def test_expand_paths_against_brute_force(expand, m, horizon, length):
    rng = SplitMix64(m * 100 + horizon)
    steps = np.array([random_unitary(rng, m) for _ in range(horizon)]).reshape(horizon, m, m)
    psi = rng.complex(m)
    psi /= np.linalg.norm(psi)
    prefixes = _kernels.prefix_amplitudes(steps, psi, length)
    got = expand(prefixes, 0, length, steps, horizon)
    np.testing.assert_allclose(got, brute_amplitudes(steps, psi, horizon), atol=1e-15)


@pytest.mark.parametrize("expand", [_kernels.expand_paths_numba, _kernels.expand_paths_numpy])
def test_expand_paths_blocks_concatenate(expand):
    rng = SplitMix64(5)
    steps = np.array([random_unitary(rng, 3) for _ in range(4)])
    psi = np.array([0.6, 0.8j, 0])
    prefixes = _kernels.prefix_amplitudes(steps, psi, 2)
    whole = expand(prefixes, 0, 2, steps, 4)
    parts = [expand(prefixes[lo:hi], lo, 2, steps, 4) for lo, hi in [(0, 4), (4, 5), (5, 9)]]
    np.testing.assert_array_equal(np.concatenate(parts), whole)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, QMEASURE_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import qmeasure; print(qmeasure.backend())"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"
