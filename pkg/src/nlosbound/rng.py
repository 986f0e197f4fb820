"""Deterministic 64-bit PRNG used for scenario generation and simulations.

The generator is a splitmix64 stream.  The update is documented here because
the reproducibility contracts (scenario files, trial CSVs) depend on it being
bit-exact across runs and implementations:

    state  <- (state + 0x9E3779B97F4A7C15) mod 2**64
    z      <- state
    z      <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2**64
    z      <- (z XOR (z >> 27)) * 0x94D049BB133111EB   mod 2**64
    output <- z XOR (z >> 31)

Uniform doubles take the top 53 bits of the output:
u = (output >> 11) * 2**-53, which lies in [0, 1).
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB

_TWO53_INV = 2.0 ** -53


def _finalize(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def mix64(seed: int, index: int) -> int:
    """Derive a sub-seed from (seed, index).

    Adds (index + 1) golden-ratio increments to the seed and applies the
    splitmix64 finalizer, so mix64(s, 0) differs from the raw seed and
    distinct indices give independent streams.
    """
    x = (int(seed) + GOLDEN * (int(index) + 1)) & MASK64
    return _finalize(x)


class RngState:
    """splitmix64 stream; a small mutable value, never shared between threads."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return _finalize(self.state)

    def next_float(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * _TWO53_INV

    def next_unit(self) -> float:
        """Uniform double in (0, 1]; safe as input to -log(u)."""
        return ((self.next_u64() >> 11) + 1) * _TWO53_INV

    def u64_array(self, count: int) -> np.ndarray:
        """Vectorized draw of `count` outputs, bit-identical to repeated next_u64()."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        steps = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self.state) + np.uint64(GOLDEN) * steps
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
        z = z ^ (z >> np.uint64(31))
        self.state = (self.state + count * GOLDEN) & MASK64
        return z

    def floats_array(self, count: int) -> np.ndarray:
        """Vectorized uniforms in [0, 1)."""
        return (self.u64_array(count) >> np.uint64(11)).astype(np.float64) * _TWO53_INV

    def units_array(self, count: int) -> np.ndarray:
        """Vectorized uniforms in (0, 1]."""
        hi = (self.u64_array(count) >> np.uint64(11)).astype(np.float64)
        return (hi + 1.0) * _TWO53_INV
