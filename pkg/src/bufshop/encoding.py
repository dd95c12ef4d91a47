"""Random-key bridge between continuous positions and job sequences.

A position is a real vector of one key per job.  Sorting the keys gives the
stage-1 launch order, so any continuous optimizer can search permutation
space with its update equations unchanged.  Only the ranks matter: any
strictly increasing transform of all keys decodes to the same sequence.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class Bounds(NamedTuple):
    lower: float
    upper: float


DEFAULT_BOUNDS = Bounds(0.0, 1.0)


def keys_to_sequence(keys) -> tuple[int, ...]:
    """Job ids sorted by ascending key; equal keys break toward lower id."""
    order = np.argsort(np.asarray(keys, dtype=float), kind="stable")
    return tuple(int(i) + 1 for i in order)


def clamp(keys, bounds: Bounds = DEFAULT_BOUNDS) -> np.ndarray:
    """Project every key into the bounds; a no-op for in-range keys."""
    return np.clip(np.asarray(keys, dtype=float), bounds.lower, bounds.upper)


def random_position(n: int, bounds: Bounds = DEFAULT_BOUNDS,
                    rng: np.random.Generator | None = None) -> np.ndarray:
    """Fresh position with keys drawn uniformly inside the bounds."""
    if n < 1:
        raise ValueError(f"position needs at least one key, got n={n}")
    rng = rng if rng is not None else np.random.default_rng()
    return rng.uniform(bounds.lower, bounds.upper, n)
