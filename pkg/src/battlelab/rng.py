"""Deterministic seed derivation.

Every game, agent and resample draws its seed from `derive_seed`, a
splitmix64-style combiner over plain integers. Unlike Python's `hash`, it is
stable across processes and runs, which is what makes reruns and parallel
fan-out reproduce results exactly.
"""
from __future__ import annotations

_MASK = (1 << 64) - 1


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def derive_seed(*components: int) -> int:
    """Combine integer components into a uint64 seed."""
    state = 0x9E3779B97F4A7C15
    for c in components:
        state = _mix((state + (int(c) & _MASK) + 0x9E3779B97F4A7C15) & _MASK)
    return _mix(state)
