"""SplitMix64 stream used by the property runner.

The generator is fully specified so that seeds reproduce across
implementations in any language:

    state <- state + 0x9E3779B97F4A7C15            (mod 2^64)
    z <- state
    z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9     (mod 2^64)
    z <- (z ^ (z >> 27)) * 0x94D049BB133111EB     (mod 2^64)
    output z ^ (z >> 31)

Derived draws:

* ``uniform``: ``(x >> 11) * 2^-53`` in [0, 1)
* ``integers(lo, hi)``: ``lo + x mod (hi - lo)`` (modulo bias is accepted)
* ``spawn()``: a child generator seeded with the parent's next output

Because the state advances by a constant, the k-th output depends only on
``seed + k * golden`` and a block of draws is computed in one vectorized
step.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK = (1 << 64) - 1


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK

    def next_u64(self) -> int:
        return int(self.u64(1)[0])

    def u64(self, n: int) -> np.ndarray:
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            states = np.uint64(self.state) + steps * np.uint64(GOLDEN)
            out = _mix(states)
        self.state = (self.state + n * GOLDEN) & MASK
        return out

    def uniform(self, n: int | None = None, low: float = 0.0, high: float = 1.0):
        k = 1 if n is None else n
        x = (self.u64(k) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        x = low + (high - low) * x
        return float(x[0]) if n is None else x

    def integers(self, low: int, high: int, n: int | None = None):
        """Integers in [low, high)."""
        if high <= low:
            raise ValueError("empty integer range")
        k = 1 if n is None else n
        x = (self.u64(k) % np.uint64(high - low)).astype(np.int64) + low
        return int(x[0]) if n is None else x

    def complex(self, shape, scale: float = 1.0) -> np.ndarray:
        size = int(np.prod(shape))
        re = self.uniform(size, -scale, scale)
        im = self.uniform(size, -scale, scale)
        return (re + 1j * im).reshape(shape)

    def bernoulli(self, n: int, p: float) -> np.ndarray:
        return self.uniform(n) < p

    def choice(self, options):
        return options[self.integers(0, len(options))]

    def spawn(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())
