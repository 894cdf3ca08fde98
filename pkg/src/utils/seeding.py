"""
Counter-based random streams.

Every draw is addressed by (seed, tag, *key, block). Block b of a stream comes from a
Philox generator keyed with SeedSequence(seed, spawn_key=(tag, *key, b)), so the values
at a given position never depend on how many values were requested or on which thread
asked for them.
"""
from enum import IntEnum
from typing import Tuple

import numpy as np

# Values per counter block.
BLOCK_SIZE = 65536


class StreamTag(IntEnum):
    """Independent random streams derived from one seed."""
    SIZES = 1
    PAYLOAD = 2
    FLAGS = 3
    KEY = 4
    PADDING = 5
    TRIAL = 6
    DETECTOR = 7
    MESSAGE = 8


def _spawn_key(tag: int, key: Tuple[int, ...]) -> Tuple[int, ...]:
    spawn = (int(tag),) + tuple(int(k) for k in key)
    if any(k < 0 for k in spawn):
        raise ValueError(f"stream keys must be non-negative, got {spawn}")
    return spawn


def generator(seed: int, tag: int, *key: int) -> np.random.Generator:
    """Philox generator for one addressed stream."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence(int(seed), spawn_key=_spawn_key(tag, key))
    return np.random.Generator(np.random.Philox(sequence))


def uniforms(seed: int, tag: int, n: int, *key: int) -> np.ndarray:
    """First n uniforms on [0, 1) of stream (seed, tag, *key)."""
    out = np.empty(n, dtype=np.float64)
    for block, start in enumerate(range(0, n, BLOCK_SIZE)):
        stop = min(n, start + BLOCK_SIZE)
        out[start:stop] = generator(seed, tag, *key, block).random(stop - start)
    return out


def random_bits(seed: int, tag: int, n: int, *key: int) -> np.ndarray:
    """First n fair bits (uint8 0/1) of stream (seed, tag, *key)."""
    out = np.empty(n, dtype=np.uint8)
    for block, start in enumerate(range(0, n, BLOCK_SIZE)):
        stop = min(n, start + BLOCK_SIZE)
        out[start:stop] = generator(seed, tag, *key, block).integers(0, 2, size=stop - start, dtype=np.uint8)
    return out
