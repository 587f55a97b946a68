"""Deterministic seed derivation.

Every stochastic routine in this package derives its working seeds from a
single master seed plus a fixed integer key path, so re-running anything
with the same inputs reproduces the same stream of decisions, and parallel
execution can hand each task its own independent seed without sharing RNG
state.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def child_seeds(count: int, *key: int) -> list[int]:
    """Derive ``count`` independent 64-bit seeds from an integer key path.

    The key path typically starts with a master seed followed by structural
    indices (iteration number, run number, trial number, ...). The same key
    path always yields the same seeds.
    """
    entropy = [k & _MASK for k in key]
    ss = np.random.SeedSequence(entropy)
    return [int(s) for s in ss.generate_state(count, dtype=np.uint64)]


def child_seed(*key: int) -> int:
    """Single-seed convenience wrapper around :func:`child_seeds`."""
    return child_seeds(1, *key)[0]
