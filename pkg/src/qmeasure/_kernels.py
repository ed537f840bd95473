"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Set ``QMEASURE_DISABLE_NUMBA=1`` before import to force the numpy path.
Both variants are always importable under explicit names so tests and the
benchmark can compare them directly; the unsuffixed names dispatch.
"""

import math
import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        return decorator


USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("QMEASURE_DISABLE_NUMBA", "") not in ("1", "true", "yes")

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


# ---------------------------------------------------------------------------
# Complex Hermitian cyclic Jacobi
# ---------------------------------------------------------------------------


def _rotation(app, aqq, apq):
    """Rotation parameters zeroing the (p, q) entry of a Hermitian 2x2 block.

    Returns (c, s, phase, t, r) with ``apq = r * phase`` and the unitary
    W = [[c, s], [-s*conj(phase), c*conj(phase)]] so that W^H A W is diagonal.
    """
    r = abs(apq)
    phase = apq / r
    tau = (aqq - app) / (2.0 * r)
    if tau >= 0.0:
        t = 1.0 / (tau + math.hypot(1.0, tau))
    else:
        t = -1.0 / (-tau + math.hypot(1.0, tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, t * c, phase, t, r


@njit(cache=True, nogil=True)
def _jacobi_eigh_nb(a, tol, max_sweeps):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    scale = math.sqrt(scale)
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * (a[i, j].real ** 2 + a[i, j].imag ** 2)
        if math.sqrt(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                phase = apq / r
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                cph = phase.conjugate()
                # columns: A <- A W
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * cph * akq
                    a[k, q] = s * akp + c * cph * akq
                # rows: A <- W^H A
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * phase * aqk
                    a[q, k] = s * apk + c * phase * aqk
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * cph * vkq
                    v[k, q] = s * vkp + c * cph * vkq
        sweeps += 1
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, sweeps


def _jacobi_eigh_np(a, tol, max_sweeps):
    n = a.shape[0]
    a = np.array(a, dtype=np.complex128, copy=True)
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    iu = np.triu_indices(n, 1)
    sweeps = 0
    while sweeps < max_sweeps:
        off = math.sqrt(2.0 * float(np.sum(np.abs(a[iu]) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                c, s, phase, t, r = _rotation(app, aqq, apq)
                cph = phase.conjugate()
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * cph * colq
                a[:, q] = s * colp + c * cph * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * phase * rowq
                a[q, :] = s * rowp + c * phase * rowq
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * cph * vq
                v[:, q] = s * vp + c * cph * vq
        sweeps += 1
    return np.real(np.diag(a)).copy(), v, sweeps


def jacobi_eigh_numba(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    w, v, sweeps = _jacobi_eigh_nb(np.ascontiguousarray(a, dtype=np.complex128), tol, max_sweeps)
    return _sorted(w, v) + (sweeps,)


def jacobi_eigh_numpy(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    w, v, sweeps = _jacobi_eigh_np(np.asarray(a, dtype=np.complex128), tol, max_sweeps)
    return _sorted(w, v) + (sweeps,)


def _sorted(w, v):
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


# ---------------------------------------------------------------------------
# Min-kernel for quantization
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _min_kernel_nb(f, sw):
    n = f.shape[0]
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            val = sw[i] * min(f[i], f[j]) * sw[j]
            out[i, j] = val
            out[j, i] = val
    return out


def min_kernel_numba(f, sqrt_weights):
    """Standard-coordinate matrix sqrt(w_y) min(f_x, f_y) sqrt(w_x)."""
    return _min_kernel_nb(np.ascontiguousarray(f, dtype=np.float64), np.ascontiguousarray(sqrt_weights, dtype=np.float64))


def min_kernel_numpy(f, sqrt_weights):
    f = np.asarray(f, dtype=np.float64)
    sw = np.asarray(sqrt_weights, dtype=np.float64)
    return sw[:, None] * np.minimum.outer(f, f) * sw[None, :]


# ---------------------------------------------------------------------------
# Path amplitude enumeration
# ---------------------------------------------------------------------------
#
# Paths are base-m integers with the initial site as the most significant
# digit.  A worker receives a block of prefixes of fixed length and expands
# each to all its descendants in lexicographic order.  Both variants apply
# the same left-to-right multiplication sequence, so results are identical
# however the prefix range is split.


def prefix_amplitudes_numpy(steps, init, length):
    """Amplitudes of all prefixes gamma_0..gamma_{length-1}, length >= 1."""
    m = init.shape[0]
    amps = np.asarray(init, dtype=np.complex128).copy()
    for k in range(1, length):
        last = np.arange(amps.shape[0]) % m
        amps = (amps[:, None] * steps[k - 1][:, last].T).reshape(-1)
    return amps


@njit(cache=True, nogil=True)
def _prefix_nb(steps, init, length):
    m = init.shape[0]
    amps = init.copy()
    for k in range(1, length):
        nxt = np.empty(amps.shape[0] * m, dtype=np.complex128)
        for i in range(amps.shape[0]):
            last = i % m
            for d in range(m):
                nxt[i * m + d] = amps[i] * steps[k - 1, d, last]
        amps = nxt
    return amps


def prefix_amplitudes_numba(steps, init, length):
    # compiled like the expansion kernel so the rounding of every product is
    # the same whichever kernel performs it
    init = np.ascontiguousarray(init, dtype=np.complex128)
    if length == 1:
        return init.copy()
    return _prefix_nb(np.ascontiguousarray(steps, dtype=np.complex128), init, length)


@njit(cache=True, nogil=True)
def _expand_nb(prefix_amps, first_prefix, length, steps, horizon, out):
    m = steps.shape[1]
    remaining = horizon + 1 - length
    block = 1
    for _ in range(remaining):
        block *= m
    partial = np.empty(remaining + 1, dtype=np.complex128)
    digits = np.zeros(remaining + 1, dtype=np.int64)
    for pi in range(prefix_amps.shape[0]):
        base = pi * block
        digits[0] = (first_prefix + pi) % m
        partial[0] = prefix_amps[pi]
        for j in range(1, remaining + 1):
            digits[j] = 0
            partial[j] = partial[j - 1] * steps[length - 2 + j, 0, digits[j - 1]]
        for idx in range(block):
            out[base + idx] = partial[remaining]
            # odometer increment; recompute only the suffix that changed
            j = remaining
            while j > 0 and digits[j] == m - 1:
                digits[j] = 0
                j -= 1
            if j == 0:
                break
            digits[j] += 1
            partial[j] = partial[j - 1] * steps[length - 2 + j, digits[j], digits[j - 1]]
            for k in range(j + 1, remaining + 1):
                partial[k] = partial[k - 1] * steps[length - 2 + k, 0, digits[k - 1]]


def expand_paths_numba(prefix_amps, first_prefix, length, steps, horizon):
    m = steps.shape[1] if steps.shape[0] else prefix_amps.shape[0]
    block = m ** (horizon + 1 - length)
    out = np.empty(prefix_amps.shape[0] * block, dtype=np.complex128)
    if horizon + 1 == length:
        out[:] = prefix_amps
        return out
    _expand_nb(
        np.ascontiguousarray(prefix_amps, dtype=np.complex128),
        first_prefix,
        length,
        np.ascontiguousarray(steps, dtype=np.complex128),
        horizon,
        out,
    )
    return out


def expand_paths_numpy(prefix_amps, first_prefix, length, steps, horizon):
    amps = np.asarray(prefix_amps, dtype=np.complex128).copy()
    if steps.shape[0] == 0:
        return amps
    m = steps.shape[1]
    last = (first_prefix + np.arange(amps.shape[0])) % m
    for k in range(length, horizon + 1):
        amps = (amps[:, None] * steps[k - 1][:, last].T).reshape(-1)
        last = np.tile(np.arange(m), amps.shape[0] // m)
    return amps


if USE_NUMBA:
    jacobi_eigh = jacobi_eigh_numba
    min_kernel = min_kernel_numba
    expand_paths = expand_paths_numba
    prefix_amplitudes = prefix_amplitudes_numba
else:
    jacobi_eigh = jacobi_eigh_numpy
    min_kernel = min_kernel_numpy
    expand_paths = expand_paths_numpy
    prefix_amplitudes = prefix_amplitudes_numpy


def backend():
    return "numba" if USE_NUMBA else "numpy"
