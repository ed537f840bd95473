"""Finite unitary systems and their n-path decoherence structure.

An n-path ``gamma_0 gamma_1 ... gamma_n`` over ``m`` sites is encoded as the
base-m integer with ``gamma_0`` as the most significant digit, so path
indices enumerate digit strings in lexicographic order.

The decoherence functional of an ensemble has rank at most ``m``: it only
couples paths with the same final site.  It is therefore stored as the
amplitude vector plus the final-site labels and every event-level quantity
is an O(|Omega_n|) reduction.  The dense matrix is available on request
below a size cap.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .decoherence import State, decoherence_functional
from .linalg import LinearOperator
from .measure import Event, MeasureSpace

UNITARY_TOL = 1e-10
NORMALIZATION_TOL = 1e-10
DEFAULT_MAX_PATHS = 2**24
DEFAULT_DENSE_CAP = 4096


class NotUnitaryError(ValueError):
    code = "NOT_UNITARY"


class CapExceeded(RuntimeError):
    code = "CAP_EXCEEDED"


class NormalizationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PathConfig:
    max_paths: int = DEFAULT_MAX_PATHS
    dense_cap: int = DEFAULT_DENSE_CAP
    workers: int = 1


def unitarity_residual(u: np.ndarray) -> float:
    eye = np.eye(u.shape[0])
    return max(float(np.linalg.norm(u.conj().T @ u - eye)), float(np.linalg.norm(u @ u.conj().T - eye)))


@dataclass(frozen=True, eq=False)
class UnitarySystem:
    """One-step unitaries; ``steps[k]`` is U(k+1, k) on C^m."""

    steps: np.ndarray
    dim: int = field(init=False)

    def __init__(self, steps: Sequence, dim: int | None = None):
        arr = np.array([np.asarray(s, dtype=np.complex128) for s in steps], dtype=np.complex128)
        if arr.size == 0:
            if dim is None:
                raise ValueError("dim is required for a system without steps")
            arr = np.zeros((0, dim, dim), dtype=np.complex128)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError("steps must be square matrices of equal size")
        if dim is not None and arr.shape[1] != dim:
            raise ValueError(f"steps are {arr.shape[1]}x{arr.shape[1]}, expected dim {dim}")
        for k, u in enumerate(arr):
            res = unitarity_residual(u)
            if res > UNITARY_TOL:
                raise NotUnitaryError(f"step {k} is not unitary (residual {res:.3e})")
        arr.setflags(write=False)
        object.__setattr__(self, "steps", arr)
        object.__setattr__(self, "dim", arr.shape[1])

    @classmethod
    def constant(cls, u, n: int) -> "UnitarySystem":
        u = np.asarray(u, dtype=np.complex128)
        return cls([u] * n, dim=u.shape[0])

    @property
    def num_steps(self) -> int:
        return self.steps.shape[0]


def compose(sys: UnitarySystem, s: int, r: int) -> np.ndarray:
    """U(s, r) = U(s, s-1) ... U(r+1, r)."""
    if r > s:
        raise ValueError(f"compose needs r <= s, got r={r}, s={s}")
    if r < 0 or s > sys.num_steps:
        raise ValueError(f"time {s} beyond the {sys.num_steps} available steps")
    out = np.eye(sys.dim, dtype=np.complex128)
    for k in range(r, s):
        out = sys.steps[k] @ out
    return out


@dataclass(frozen=True)
class PathSpace:
    m: int
    horizon: int

    def __post_init__(self):
        if self.m < 1 or self.horizon < 0:
            raise ValueError("need m >= 1 sites and horizon >= 0")

    @property
    def size(self) -> int:
        return self.m ** (self.horizon + 1)

    def index(self, digits: Sequence[int]) -> int:
        if len(digits) != self.horizon + 1:
            raise ValueError(f"path needs {self.horizon + 1} sites, got {len(digits)}")
        idx = 0
        for d in digits:
            if not 0 <= d < self.m:
                raise ValueError(f"site {d} out of range for m={self.m}")
            idx = idx * self.m + int(d)
        return idx

    def digits(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise ValueError(f"path index {index} out of range")
        out = []
        for _ in range(self.horizon + 1):
            index, d = divmod(index, self.m)
            out.append(d)
        return tuple(reversed(out))

    def parse(self, text: str) -> int:
        """Index of a digit string such as ``"010"`` (base-36 digits)."""
        return self.index([int(c, 36) for c in text])

    def format(self, index: int) -> str:
        return "".join(np.base_repr(d, 36).lower() for d in self.digits(index))

    def sites_at(self, time: int) -> np.ndarray:
        """Site occupied at ``time`` by every path, in index order."""
        if not 0 <= time <= self.horizon:
            raise ValueError(f"time {time} outside 0..{self.horizon}")
        stride = self.m ** (self.horizon - time)
        return (np.arange(self.size, dtype=np.int64) // stride) % self.m

    def uniform_space(self) -> MeasureSpace:
        return MeasureSpace.uniform(self.size)

    def counting_space(self) -> MeasureSpace:
        return MeasureSpace.counting(self.size)

    # event builders

    def _site(self, value: int) -> int:
        if not 0 <= value < self.m:
            raise ValueError(f"site {value} out of range for m={self.m}")
        return value

    def site_at(self, time: int, value: int) -> Event:
        return Event(self.sites_at(time) == self._site(value))

    def final_site(self, value: int) -> Event:
        return self.site_at(self.horizon, value)

    def initial_site(self, value: int) -> Event:
        return self.site_at(0, value)

    def explicit(self, paths: Iterable) -> Event:
        idx = [self.parse(p) if isinstance(p, str) else self.index(p) for p in paths]
        return Event.from_indices(self.size, idx)

    def everything(self) -> Event:
        return Event(np.ones(self.size, dtype=bool))

    def nothing(self) -> Event:
        return Event(np.zeros(self.size, dtype=bool))


def amplitude(sys: UnitarySystem, path: Sequence[int], psi) -> complex:
    """a_psi(gamma) = psi(gamma_0) prod_k <e_{gamma_k}, U(k, k-1) e_{gamma_{k-1}}>."""
    psi = np.asarray(psi, dtype=np.complex128)
    n = len(path) - 1
    if n < 0 or n > sys.num_steps:
        raise ValueError(f"malformed path of length {len(path)}")
    if any(not 0 <= g < sys.dim for g in path):
        raise ValueError("path site out of range")
    a = psi[path[0]]
    for k in range(1, n + 1):
        a = a * sys.steps[k - 1][path[k], path[k - 1]]
    return complex(a)


def _prefix_length(m: int, horizon: int, workers: int) -> int:
    length = 1
    while m**length < workers and length < horizon + 1:
        length += 1
    return length


def enumerate_amplitudes(sys: UnitarySystem, init, horizon: int, workers: int = 1) -> np.ndarray:
    """Amplitudes of every n-path, split over ``workers`` threads by prefix.

    With ``init`` all ones this yields the bare transition products b(gamma).
    """
    steps = sys.steps[:horizon]
    init = np.asarray(init, dtype=np.complex128)
    workers = max(1, int(workers))
    length = _prefix_length(sys.dim, horizon, workers)
    prefixes = _kernels.prefix_amplitudes(steps, init, length)
    if workers == 1:
        return _kernels.expand_paths(prefixes, 0, length, steps, horizon)
    bounds = np.linspace(0, prefixes.shape[0], min(workers, prefixes.shape[0]) + 1).astype(int)
    chunks = [(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(
            pool.map(lambda c: _kernels.expand_paths(prefixes[c[0] : c[1]], c[0], length, steps, horizon), chunks)
        )
    return np.concatenate(parts)


@dataclass(frozen=True, eq=False)
class PathEnsemble:
    system: UnitarySystem
    psi: np.ndarray
    horizon: int
    amplitudes: np.ndarray
    config: PathConfig = PathConfig()

    @property
    def space(self) -> PathSpace:
        return PathSpace(self.system.dim, self.horizon)

    @cached_property
    def final_site(self) -> np.ndarray:
        return np.arange(self.amplitudes.shape[0], dtype=np.int64) % self.system.dim

    @cached_property
    def initial_site(self) -> np.ndarray:
        return self.space.sites_at(0)

    @cached_property
    def transition_products(self) -> np.ndarray:
        """b(gamma) for every path."""
        ones = np.ones(self.system.dim, dtype=np.complex128)
        return enumerate_amplitudes(self.system, ones, self.horizon, self.config.workers)

    def normalization_residual(self) -> float:
        return abs(float(np.sum(np.abs(self.amplitudes) ** 2)) - 1.0)

    def site_sums(self, A: Event) -> np.ndarray:
        """g_s(A) = sum of amplitudes over paths in A ending at site s."""
        if A.size != self.amplitudes.shape[0]:
            raise ValueError("path event does not match the ensemble's path space")
        a = self.amplitudes[A.mask]
        s = self.final_site[A.mask]
        m = self.system.dim
        return np.bincount(s, weights=a.real, minlength=m) + 1j * np.bincount(s, weights=a.imag, minlength=m)


def build_ensemble(sys: UnitarySystem, psi, horizon: int, config: PathConfig = PathConfig(), workers: int | None = None) -> PathEnsemble:
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if psi.shape[0] != sys.dim:
        raise ValueError(f"psi has length {psi.shape[0]}, system has {sys.dim} sites")
    if abs(np.linalg.norm(psi) - 1.0) > NORMALIZATION_TOL:
        raise ValueError("psi must be a unit vector")
    if horizon < 0 or horizon > sys.num_steps:
        raise ValueError(f"horizon {horizon} needs {horizon} steps, system has {sys.num_steps}")
    size = sys.dim ** (horizon + 1)
    if size > config.max_paths:
        raise CapExceeded(f"{size} paths exceed the ensemble cap of {config.max_paths}")
    if workers is not None:
        config = PathConfig(config.max_paths, config.dense_cap, workers)
    amps = enumerate_amplitudes(sys, psi, horizon, config.workers)
    amps.setflags(write=False)
    psi = psi.copy()
    psi.setflags(write=False)
    ens = PathEnsemble(sys, psi, horizon, amps, config)
    res = ens.normalization_residual()
    if res > max(NORMALIZATION_TOL, 1e-15 * math.sqrt(size)):
        raise NormalizationError(f"sum of |amplitude|^2 is off by {res:.3e}")
    return ens


def class_operator(ens: PathEnsemble, A: Event) -> np.ndarray:
    """C_n(A) = sum over gamma in A of b(gamma) |e_{gamma_n}><e_{gamma_0}|."""
    if A.size != ens.amplitudes.shape[0]:
        raise ValueError("path event does not match the ensemble's path space")
    m = ens.system.dim
    b = ens.transition_products[A.mask]
    cell = ens.final_site[A.mask] * m + ens.initial_site[A.mask]
    flat = np.bincount(cell, weights=b.real, minlength=m * m) + 1j * np.bincount(cell, weights=b.imag, minlength=m * m)
    return flat.reshape(m, m)


def path_decoherence(ens: PathEnsemble, A: Event, B: Event) -> complex:
    """Delta_n(A, B) = sum_s g_s(A) conj(g_s(B))."""
    return complex(np.sum(ens.site_sums(A) * np.conj(ens.site_sums(B))))


def path_q_measure(ens: PathEnsemble, A: Event) -> float:
    return float(np.sum(np.abs(ens.site_sums(A)) ** 2))


def dense_decoherence_matrix(ens: PathEnsemble) -> np.ndarray:
    """Matrix of Delta_n as an operator on l2(Omega_n).

    Entry (gamma', gamma) is Delta_n(gamma, gamma') = conj(a(gamma')) a(gamma)
    delta(gamma_n, gamma'_n), i.e. <Delta_n e_gamma, e_gamma'> = Delta_n(gamma, gamma')
    and tr(|chi_A><chi_B| Delta_n) = Delta_n(A, B).
    """
    size = ens.amplitudes.shape[0]
    if size > ens.config.dense_cap:
        raise CapExceeded(f"{size} paths exceed the dense cap of {ens.config.dense_cap}")
    w = np.conj(ens.amplitudes)
    same = ens.final_site[:, None] == ens.final_site[None, :]
    return np.where(same, np.outer(w, np.conj(w)), 0.0)


def bridge_check(ens: PathEnsemble, A: Event, B: Event) -> tuple[complex, complex]:
    """Low-rank Delta_n(A, B) next to tr(rho D(A, B)) on the counting-measure space."""
    space = ens.space.counting_space()
    rho = State.unchecked(LinearOperator(dense_decoherence_matrix(ens), space))
    return path_decoherence(ens, A, B), decoherence_functional(rho, A, B)
