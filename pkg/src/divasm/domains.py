"""Finite integer domains as bit masks.

A domain over 0..H is a Python int whose set bits are the remaining values;
stores are plain lists of masks indexed by variable id.  Masks are cheap to
copy (one list copy per search node) and all pruning is bit arithmetic.
"""

from __future__ import annotations

__all__ = ["FAILED", "ENTAILED", "dmin", "dmax", "is_fixed", "fixed_value",
           "at_least", "at_most", "from_range", "from_values", "values",
           "size"]

# propagator outcome sentinels
FAILED = object()
ENTAILED = object()


def dmin(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def dmax(mask: int) -> int:
    return mask.bit_length() - 1


def is_fixed(mask: int) -> bool:
    return mask & (mask - 1) == 0


def fixed_value(mask: int) -> int:
    return mask.bit_length() - 1


def at_least(mask: int, lo: int) -> int:
    """Drop values below lo."""
    if lo <= 0:
        return mask
    return (mask >> lo) << lo


def at_most(mask: int, hi: int) -> int:
    """Drop values above hi."""
    if hi < 0:
        return 0
    return mask & ((1 << (hi + 1)) - 1)


def from_range(lo: int, hi: int) -> int:
    if hi < lo:
        return 0
    return ((1 << (hi - lo + 1)) - 1) << lo


def from_values(vals) -> int:
    mask = 0
    for v in vals:
        mask |= 1 << v
    return mask


def values(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def size(mask: int) -> int:
    return mask.bit_count()
