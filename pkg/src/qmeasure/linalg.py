"""Operators on L2 of a finite measure space.

Operators are stored in standard coordinates: the isometry
``f -> sqrt(w) * f`` carries L2(nu) onto a subspace of C^n, so adjoint is
the conjugate transpose and trace is the diagonal sum.  A function-coordinate
kernel K with ``(Tg)(y) = sum_x K(y, x) g(x) w_x`` has matrix
``sqrt(w_y) K(y, x) sqrt(w_x)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

import numpy as np

from . import _kernels
from .measure import DimensionError, MeasureSpace, _vector

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LinearOperator:
    matrix: np.ndarray
    space: MeasureSpace

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        n = self.space.size
        if m.shape != (n, n):
            raise DimensionError(f"operator of shape {m.shape} on space of size {n}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, space: MeasureSpace) -> "LinearOperator":
        return cls(np.zeros((space.size, space.size)), space)

    @classmethod
    def identity(cls, space: MeasureSpace) -> "LinearOperator":
        return cls(np.eye(space.size), space)

    @classmethod
    def from_kernel(cls, space: MeasureSpace, kernel) -> "LinearOperator":
        sw = space.sqrt_weights
        return cls(sw[:, None] * np.asarray(kernel) * sw[None, :], space)

    @property
    def dim(self) -> int:
        return self.space.size

    def apply(self, g) -> np.ndarray:
        """Action on a function; values on null outcomes are returned as 0."""
        s = self.matrix @ embed(self.space, g)
        return unembed(self.space, s)

    def adjoint(self) -> "LinearOperator":
        return LinearOperator(self.matrix.conj().T, self.space)

    @property
    def H(self) -> "LinearOperator":
        return self.adjoint()

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def hermitian_residual(self) -> float:
        return float(np.linalg.norm(self.matrix - self.matrix.conj().T))

    def real_part(self) -> "LinearOperator":
        """(T + T*) / 2."""
        return LinearOperator(0.5 * (self.matrix + self.matrix.conj().T), self.space)

    def _same(self, other: "LinearOperator"):
        if other.space != self.space:
            raise DimensionError("operators act on different spaces")

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        self._same(other)
        return LinearOperator(self.matrix + other.matrix, self.space)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        self._same(other)
        return LinearOperator(self.matrix - other.matrix, self.space)

    def __neg__(self) -> "LinearOperator":
        return LinearOperator(-self.matrix, self.space)

    def __mul__(self, scalar: Number) -> "LinearOperator":
        if not isinstance(scalar, Number):
            return NotImplemented
        return LinearOperator(scalar * self.matrix, self.space)

    __rmul__ = __mul__

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        self._same(other)
        return LinearOperator(self.matrix @ other.matrix, self.space)

    def __repr__(self):
        return f"LinearOperator(dim={self.dim})"


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def embed(space: MeasureSpace, f) -> np.ndarray:
    return space.sqrt_weights * _vector(space, f)


def unembed(space: MeasureSpace, s) -> np.ndarray:
    s = np.asarray(s, dtype=np.complex128)
    sw = space.sqrt_weights
    out = np.zeros_like(s)
    nz = sw > 0
    out[nz] = s[nz] / sw[nz]
    return out


def rank_one(space: MeasureSpace, u, v) -> LinearOperator:
    """The operator ``g -> <v, g> u``."""
    return LinearOperator(np.outer(embed(space, u), np.conj(embed(space, v))), space)


def _matrix(M) -> np.ndarray:
    return M.matrix if isinstance(M, LinearOperator) else np.asarray(M, dtype=np.complex128)


def check_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = _matrix(M)
    scale = max(1.0, float(np.linalg.norm(a)))
    res = float(np.linalg.norm(a - a.conj().T))
    if res > tol * scale:
        raise NotHermitianError(f"matrix is not Hermitian (residual {res:.3e})")
    return a


def hermitian_eig(M) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian operator, eigenvalues ascending."""
    a = check_hermitian(M)
    a = 0.5 * (a + a.conj().T)
    w, v, sweeps = _kernels.jacobi_eigh(a)
    return EigenDecomposition(w, v, sweeps)


def eigvalsh(M) -> np.ndarray:
    return hermitian_eig(M).eigenvalues


def operator_norm(M) -> float:
    a = _matrix(M)
    if not a.size or not np.any(a):
        return 0.0
    gram = a.conj().T @ a
    lam = float(hermitian_eig(0.5 * (gram + gram.conj().T)).eigenvalues[-1])
    return float(np.sqrt(max(lam, 0.0)))


def is_psd(M, tol: float = PSD_TOL) -> bool:
    w = eigvalsh(M)
    return bool(w.size == 0 or w[0] >= -tol)
