"""Finite measure spaces, events and random variables.

Functions on a finite sample space are plain numpy vectors indexed by
outcome.  The sigma-algebra is the full power set; an :class:`Event` is a
frozen boolean mask so set identities are exact.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

PROBABILITY_TOL = 1e-12


class DimensionError(ValueError):
    """Vector, event or operator sized for a different space."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """Outcomes ``0..size-1`` with nonnegative point masses ``weights``."""

    weights: np.ndarray
    sqrt_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64).reshape(-1)
        if w.size < 1:
            raise ValueError("a measure space needs at least one outcome")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and nonnegative")
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "sqrt_weights", _frozen(np.sqrt(w)))

    @classmethod
    def uniform(cls, size: int) -> "MeasureSpace":
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def counting(cls, size: int) -> "MeasureSpace":
        return cls(np.ones(size))

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    def total(self) -> float:
        return float(np.sum(self.weights))

    @property
    def probability(self) -> bool:
        return abs(self.total() - 1.0) <= PROBABILITY_TOL

    def event(self, members: Iterable[int] = ()) -> "Event":
        return Event.from_indices(self.size, members)

    def empty(self) -> "Event":
        return Event(np.zeros(self.size, dtype=bool))

    def omega(self) -> "Event":
        return Event(np.ones(self.size, dtype=bool))

    def __eq__(self, other):
        return isinstance(other, MeasureSpace) and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash(self.weights.tobytes())


@dataclass(frozen=True, eq=False)
class Event:
    """A subset of outcomes stored as a boolean mask."""

    mask: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mask", _frozen(np.array(self.mask, dtype=bool).reshape(-1)))

    @classmethod
    def from_indices(cls, size: int, members: Iterable[int]) -> "Event":
        mask = np.zeros(size, dtype=bool)
        idx = np.asarray(list(members), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= size):
            raise DimensionError(f"event member out of range for size {size}")
        mask[idx] = True
        return cls(mask)

    @property
    def size(self) -> int:
        return self.mask.shape[0]

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def is_empty(self) -> bool:
        return not self.mask.any()

    def _check(self, other: "Event"):
        if other.size != self.size:
            raise DimensionError("events live on different spaces")

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.mask | other.mask)

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.mask & other.mask)

    def __sub__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.mask & ~other.mask)

    def __invert__(self) -> "Event":
        return Event(~self.mask)

    def complement(self) -> "Event":
        return ~self

    def isdisjoint(self, other: "Event") -> bool:
        self._check(other)
        return not np.any(self.mask & other.mask)

    def issubset(self, other: "Event") -> bool:
        self._check(other)
        return not np.any(self.mask & ~other.mask)

    def __len__(self) -> int:
        return int(np.count_nonzero(self.mask))

    def __iter__(self):
        return iter(int(i) for i in self.indices)

    def __eq__(self, other):
        return isinstance(other, Event) and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(np.packbits(self.mask).tobytes())

    def __repr__(self):
        if self.size <= 64:
            return f"Event({{{', '.join(map(str, self.indices))}}}, size={self.size})"
        return f"Event(<{len(self)} of {self.size}>)"


def _vector(space: MeasureSpace, f, dtype=np.complex128) -> np.ndarray:
    v = np.asarray(f, dtype=dtype).reshape(-1)
    if v.shape[0] != space.size:
        raise DimensionError(f"expected length {space.size}, got {v.shape[0]}")
    return v


def _event(space: MeasureSpace, A: Event) -> Event:
    if A.size != space.size:
        raise DimensionError(f"event of size {A.size} on space of size {space.size}")
    return A


def nu(space: MeasureSpace, A: Event) -> float:
    """Measure of an event."""
    return float(np.sum(space.weights[_event(space, A).mask]))


def inner(space: MeasureSpace, f, g) -> complex:
    """Weighted inner product, conjugate-linear in ``f``."""
    fv = _vector(space, f)
    gv = _vector(space, g)
    return complex(np.sum(np.conj(fv) * gv * space.weights))


def norm(space: MeasureSpace, f) -> float:
    return float(np.sqrt(max(inner(space, f, f).real, 0.0)))


def expectation(space: MeasureSpace, f) -> float:
    if not space.probability:
        warnings.warn("expectation taken on a space that is not a probability space", stacklevel=2)
    return float(np.sum(_vector(space, f, np.float64) * space.weights))


def chi(space: MeasureSpace, A: Event) -> np.ndarray:
    """Characteristic function of ``A`` as a real vector."""
    return _event(space, A).mask.astype(np.float64)


def integral_over(space: MeasureSpace, f, A: Event) -> complex:
    """Classical integral of ``f`` over ``A``, i.e. <chi_A, f>."""
    return complex(np.sum(_vector(space, f)[_event(space, A).mask] * space.weights[A.mask]))


def pos_neg_split(f) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(f+, f-)`` with ``f = f+ - f-`` and disjoint supports."""
    f = np.asarray(f, dtype=np.float64)
    return np.maximum(f, 0.0), np.maximum(-f, 0.0)


@dataclass(frozen=True)
class SimpleForm:
    """Level decomposition of a nonnegative random variable.

    ``levels`` are the distinct positive values in increasing order,
    ``level_events[j]`` is where f takes ``levels[j]`` and
    ``upper_events[j]`` is where ``f >= levels[j]``.
    """

    levels: np.ndarray
    level_events: tuple[Event, ...]
    upper_events: tuple[Event, ...]
    size: int

    def reconstruct(self) -> np.ndarray:
        out = np.zeros(self.size)
        for alpha, A in zip(self.levels, self.level_events):
            out[A.mask] = alpha
        return out

    def increments(self) -> np.ndarray:
        """alpha_j - alpha_{j-1} with alpha_0 = 0."""
        return np.diff(self.levels, prepend=0.0)


def simple_form(f) -> SimpleForm:
    f = np.asarray(f, dtype=np.float64).reshape(-1)
    if np.any(f < 0):
        raise ValueError("simple_form needs a nonnegative random variable")
    levels = np.unique(f[f > 0])
    level_events = tuple(Event(f == a) for a in levels)
    upper_events = tuple(Event(f >= a) for a in levels)
    return SimpleForm(_frozen(levels), level_events, upper_events, f.shape[0])
