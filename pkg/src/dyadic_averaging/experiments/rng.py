"""Deterministic 64-bit pseudo-random numbers for corpus generation.

The generator is xorshift64* (shifts 12, 25, 27 and the multiplier
0x2545F4914F6CDD1D). Streams are split per (purpose, instance) by hashing the
label together with the run seed, so every corpus item draws from its own
stream regardless of how many items come before it or which process builds it.
"""

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1
MULTIPLIER = 0x2545F4914F6CDD1D

# Replaces an all-zero state, which xorshift cannot leave.
ZERO_STATE_REPLACEMENT = 0x9E3779B97F4A7C15


def split_seed(seed: int, *labels) -> int:
    """Child state for the stream named by labels under the run seed."""
    text = ":".join([str(seed & MASK64), *(str(label) for label in labels)])
    digest = hashlib.sha256(text.encode()).digest()
    state = int.from_bytes(digest[:8], "little")
    return state or ZERO_STATE_REPLACEMENT


class XorShift64Star:
    """xorshift64* generator with helpers for the draws the corpus needs."""

    def __init__(self, state: int):
        self.state = (state & MASK64) or ZERO_STATE_REPLACEMENT

    @classmethod
    def for_stream(cls, seed: int, *labels) -> "XorShift64Star":
        return cls(split_seed(seed, *labels))

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * MULTIPLIER) & MASK64

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def signs(self, size: int) -> np.ndarray:
        """Independent +-1 draws from the top bit."""
        return np.array([1.0 if self.next_u64() >> 63 else -1.0 for _ in range(size)])

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in [low, high)."""
        if high <= low:
            raise ValueError(f"Empty integer range [{low}, {high})")
        return low + int(self.random() * (high - low))
