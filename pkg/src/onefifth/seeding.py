"""Seed handling.

A run is identified by a 64-bit seed.  Replicate i of a multi-replicate
experiment draws from the sub-stream ``SeedSequence(seed, spawn_key=(i,))``;
single runs use the bare seed.  Determinism is guaranteed within this
implementation, not across numpy versions or other implementations.
"""
from __future__ import annotations

import numpy as np


def stream(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def substream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def substream_id(seed: int, index: int) -> str:
    return f"SeedSequence(entropy={seed}, spawn_key=({index},))"
