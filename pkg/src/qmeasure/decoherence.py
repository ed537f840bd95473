"""Decoherence operators, q-measure operators, states and q-measures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import LinearOperator, embed, hermitian_eig, rank_one
from .measure import DimensionError, Event, MeasureSpace, chi, inner

STATE_TOL = 1e-10
CLAMP_TOL = 1e-12


class StateError(ValueError):
    """Density matrix fails Hermiticity, positivity or unit trace."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class ConsistencyError(ArithmeticError):
    """A provably nonnegative quantity came out clearly negative."""


@dataclass(frozen=True, eq=False)
class State:
    """Density operator on L2(space) in standard coordinates."""

    operator: LinearOperator

    def __post_init__(self):
        a = self.operator.matrix
        scale = max(1.0, float(np.linalg.norm(a)))
        if np.linalg.norm(a - a.conj().T) > STATE_TOL * scale:
            raise StateError("STATE_NOT_HERMITIAN", "state is not Hermitian")
        tr = np.trace(a)
        if abs(tr - 1.0) > STATE_TOL:
            raise StateError("STATE_TRACE", f"state trace is {tr.real:.12g}, expected 1")
        lam = hermitian_eig(self.operator).eigenvalues
        if lam[0] < -STATE_TOL:
            raise StateError("STATE_NOT_PSD", f"state has eigenvalue {lam[0]:.3e}")

    @classmethod
    def from_matrix(cls, space: MeasureSpace, matrix) -> "State":
        return cls(LinearOperator(matrix, space))

    @classmethod
    def unchecked(cls, operator: LinearOperator) -> "State":
        """Wrap an operator that is a state by construction, skipping the eigensolve."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "operator", operator)
        return obj

    @property
    def space(self) -> MeasureSpace:
        return self.operator.space

    @property
    def matrix(self) -> np.ndarray:
        return self.operator.matrix

    def mix(self, other: "State", lam: float) -> "State":
        """Convex combination ``lam * self + (1 - lam) * other``."""
        return State(lam * self.operator + (1.0 - lam) * other.operator)


def pure_state(space: MeasureSpace, u) -> State:
    """The state |u><u| for a unit vector u of L2(space)."""
    nrm = inner(space, u, u).real
    if abs(nrm - 1.0) > STATE_TOL:
        raise StateError("STATE_NOT_UNIT", f"pure state vector has norm^2 {nrm:.12g}")
    return State(rank_one(space, u, u))


def decoherence_operator(space: MeasureSpace, A: Event, B: Event) -> LinearOperator:
    """D(A, B) = |chi_A><chi_B|."""
    return rank_one(space, chi(space, A), chi(space, B))


def q_measure_operator(space: MeasureSpace, A: Event) -> LinearOperator:
    """mu(A) = D(A, A)."""
    return decoherence_operator(space, A, A)


def interference(space: MeasureSpace, A: Event, B: Event) -> LinearOperator:
    """2 Re D(A, B) = D(A, B) + D(B, A) for disjoint A, B."""
    if not A.isdisjoint(B):
        raise ValueError("interference is defined for disjoint events")
    return decoherence_operator(space, A, B) + decoherence_operator(space, B, A)


def _same_space(rho: State, A: Event):
    if A.size != rho.space.size:
        raise DimensionError("event and state live on different spaces")


def decoherence_functional(rho: State, A: Event, B: Event) -> complex:
    """D_rho(A, B) = tr[rho D(A, B)] = <chi_B, rho chi_A>."""
    _same_space(rho, A)
    _same_space(rho, B)
    space = rho.space
    a = embed(space, chi(space, A))
    b = embed(space, chi(space, B))
    return complex(np.conj(b) @ rho.matrix @ a)


def _clamp(value: float) -> float:
    if value < 0.0:
        if value < -CLAMP_TOL:
            raise ConsistencyError(f"q-measure evaluated to {value:.3e}")
        return 0.0
    return value


def q_measure(rho: State, A: Event) -> float:
    """mu_rho(A) = tr[rho mu(A)]."""
    return _clamp(decoherence_functional(rho, A, A).real)


def gram_matrix(rho: State, events: Sequence[Event]) -> np.ndarray:
    """Matrix with entries D_rho(A_i, A_j)."""
    if not events:
        raise ValueError("gram_matrix needs at least one event")
    for A in events:
        _same_space(rho, A)
    space = rho.space
    X = np.stack([embed(space, chi(space, A)) for A in events], axis=1)
    # entry (i, j) = <chi_j, rho chi_i>
    return (X.conj().T @ rho.matrix @ X).T
