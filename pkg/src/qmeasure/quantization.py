"""Quantization of random variables and quantum integrals.

For f >= 0 the quantization is the integral operator with kernel
``min(f(x), f(y))``; a signed f is quantized through its positive and
negative parts.  Two independent evaluations of the quantum integral are
provided alongside the trace: the level-set tail sum and, for pure states,
the telescoped quadratic form over the upper level sets.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .decoherence import State, q_measure
from .linalg import LinearOperator, embed
from .measure import Event, MeasureSpace, _vector, chi, integral_over as _classical_integral, pos_neg_split, simple_form

IMAG_TOL = 1e-10


def _quantize_nonneg(space: MeasureSpace, f: np.ndarray) -> np.ndarray:
    if not np.any(f):
        return np.zeros((space.size, space.size))
    return _kernels.min_kernel(f, space.sqrt_weights)


def quantize(space: MeasureSpace, f) -> LinearOperator:
    """Self-adjoint operator associated with the random variable ``f``."""
    f = _vector(space, f, np.float64)
    if not np.all(np.isfinite(f)):
        raise ValueError("random variable must be finite")
    fp, fm = pos_neg_split(f)
    m = _quantize_nonneg(space, fp)
    if np.any(fm):
        m = m - _quantize_nonneg(space, fm)
    return LinearOperator(m, space)


def scale_check(space: MeasureSpace, f, alpha: float) -> tuple[LinearOperator, LinearOperator]:
    """Return ``(quantize(alpha f), alpha * quantize(f))``."""
    f = np.asarray(f, dtype=np.float64)
    return quantize(space, alpha * f), alpha * quantize(space, f)


def quantum_integral(rho: State, f) -> float:
    """tr(rho f^)."""
    val = complex(np.sum(rho.matrix * quantize(rho.space, f).matrix.T))
    if abs(val.imag) > IMAG_TOL:
        raise ArithmeticError(f"trace of Hermitian product has imaginary part {val.imag:.3e}")
    return val.real


def integral_over(rho: State, f, A: Event) -> float:
    """Quantum integral of ``chi_A * f``."""
    return quantum_integral(rho, chi(rho.space, A) * np.asarray(f, dtype=np.float64))


def _tail_sum_nonneg(rho: State, f: np.ndarray) -> float:
    form = simple_form(f)
    return float(sum(d * q_measure(rho, B) for d, B in zip(form.increments(), form.upper_events)))


def tail_sum(rho: State, f) -> float:
    """Integral of lambda -> mu_rho{f > lambda} minus the negative tail.

    For a simple f the integrand is piecewise constant between consecutive
    levels, so the integral over [0, inf) is the finite telescoped sum.
    """
    f = _vector(rho.space, f, np.float64)
    fp, fm = pos_neg_split(f)
    return _tail_sum_nonneg(rho, fp) - _tail_sum_nonneg(rho, fm)


def simple_quadratic_form(space: MeasureSpace, f, u) -> float:
    """<f^ u, u> as sum_j (alpha_j - alpha_{j-1}) |int_{B_j} u dnu|^2."""
    f = _vector(space, f, np.float64)
    if np.any(f < 0):
        raise ValueError("simple_quadratic_form needs f >= 0")
    form = simple_form(f)
    total = 0.0
    for d, B in zip(form.increments(), form.upper_events):
        total += d * abs(_classical_integral(space, u, B)) ** 2
    return float(total)


def quadratic_form(space: MeasureSpace, f, u) -> float:
    """<f^ u, u> straight from the operator matrix."""
    s = embed(space, u)
    return float(np.real(np.conj(s) @ quantize(space, f).matrix @ s))
