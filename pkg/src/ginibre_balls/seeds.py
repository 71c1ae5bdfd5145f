"""Deterministic RNG streams for replicated Monte Carlo runs.

One root seed governs a whole experiment.  Every (stream, replicate) pair
gets its own independent generator through ``numpy.random.SeedSequence``
with ``spawn_key=(stream, replicate)``; the derivation is a pure function
of the three integers, so results do not depend on execution order or on
the number of workers, and distinct streams never collide.

Convention used throughout the package:

* ``stream`` indexes a logical sub-experiment (e.g. a schedule point),
* ``replicate`` indexes the independent repetition inside that stream.
"""

from __future__ import annotations

import numpy as np

__all__ = ["replicate_rng", "normalize_seed"]


def normalize_seed(seed) -> int:
    """Validate a root seed and return it as a plain non-negative int."""
    if isinstance(seed, (bool, float)):
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    try:
        value = int(seed)
    except (TypeError, ValueError):
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    if value < 0:
        raise ValueError(f"seed must be non-negative, got {value}")
    return value


def replicate_rng(root_seed: int, stream: int = 0, replicate: int = 0) -> np.random.Generator:
    """Generator for one replicate of one stream under a root seed."""
    root_seed = normalize_seed(root_seed)
    ss = np.random.SeedSequence(entropy=root_seed, spawn_key=(int(stream), int(replicate)))
    return np.random.default_rng(ss)
