"""Deterministic seed derivation for independent random streams.

Every stochastic stage of the library derives its own seed from a base seed
plus integer indices (path index, job index, level, step).  Derivation uses a
splitmix64 chain, so child seeds are decorrelated and reproducible without
sharing generator state between stages or workers.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 step: a 64-bit finalizer with good avalanche behavior."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix_seed(*parts: int) -> int:
    """Fold integer parts into one 64-bit seed.

    Chained as h = splitmix64(h XOR part), starting from h = 0.  Changing any
    part (or the number of parts) changes the result; (a, b) and (b, a) give
    different seeds.
    """
    if not parts:
        raise ValueError("mix_seed needs at least one part")
    h = 0
    for p in parts:
        h = splitmix64(h ^ (int(p) & _MASK))
    return h
