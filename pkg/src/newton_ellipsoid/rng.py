"""Portable 64-bit linear congruential generator.

state' = (6364136223846793005 * state + 1442695040888963407) mod 2**64
(Knuth's MMIX constants). A uniform double in [0, 1) is the top 53 bits of
the new state divided by 2**53. Seeding sets state = seed mod 2**64 and
discards one output, so traces reproduce from the integer seed alone in any
language with 64-bit unsigned arithmetic.
"""

from __future__ import annotations

from .bounds import Rect

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK = (1 << 64) - 1


class Lcg64:
    def __init__(self, seed: int = 0):
        self.state = seed & MASK
        self.next_u64()

    def next_u64(self) -> int:
        self.state = (MULTIPLIER * self.state + INCREMENT) & MASK
        return self.state

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def point_in(self, rect: Rect) -> complex:
        x = self.uniform(rect.x_lo, rect.x_hi)
        y = self.uniform(rect.y_lo, rect.y_hi)
        return complex(x, y)
