"""Deterministic 64-bit PRNG used by every randomized search component.

All randomness in the package flows through :class:`SplitMix64` so that a run
is reproducible from its integer seed alone, independent of interpreter hash
randomization or ``random`` module state.  Restart-based search draws one
generator per restart from :func:`stream`, which derives the sub-generator
state as ``mix64(seed + STREAM_GAMMA * (index + 1))``.  Two searches with the
same (seed, stream index) therefore make identical decisions.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
STREAM_GAMMA = 0xBF58476D1CE4E5B7


def mix64(z: int) -> int:
    """splitmix64 finalizer: avalanche a 64-bit value."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """splitmix64 sequence generator (Steele et al.'s SplittableRandom step)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        return mix64(self.state)

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return self.next_u64() / 2.0**64

    def randrange(self, n: int) -> int:
        """Uniform int in [0, n).  Plain modulo; documented, reproducible."""
        return self.next_u64() % n

    def choice(self, seq):
        return seq[self.next_u64() % len(seq)]


def stream(seed: int, index: int) -> SplitMix64:
    """Generator number `index` of the family rooted at `seed`."""
    return SplitMix64(mix64(seed + STREAM_GAMMA * (index + 1)))
