"""Counter-based Gaussian streams for reproducible parallel sampling.

Every sample index owns a private Philox stream keyed by (seed, index), so
a sample is a pure function of the key and is bit-identical no matter how
work is split across threads or runs.  Normals come from numpy's ziggurat
on top of the keyed stream; golden tests pin the exact values.

``gaussian_blocks`` walks many consecutive indices by re-keying a single
bit generator in place, which is ~10x faster than constructing a fresh
generator per index and produces the identical stream (covered by tests).
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

from .errors import InputError

__all__ = ["gaussian_block", "gaussian_blocks", "check_seed"]

_U64 = 1 << 64


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)):
        raise InputError("seed must be an integer")
    if not (0 <= int(seed) < _U64):
        raise InputError("seed must fit in an unsigned 64-bit integer")
    return int(seed)


def gaussian_block(seed: int, index: int, count: int) -> np.ndarray:
    """`count` standard normals from the stream keyed by (seed, index)."""
    seed = check_seed(seed)
    if index < 0 or index >= _U64:
        raise InputError("index must be a nonnegative 64-bit integer")
    key = np.array([seed, index], dtype=np.uint64)
    gen = Generator(Philox(key=key))
    return gen.standard_normal(count)


def gaussian_blocks(seed: int, first_index: int, num_blocks: int, count: int) -> np.ndarray:
    """Stack of per-index blocks: row r equals gaussian_block(seed, first_index + r, count)."""
    seed = check_seed(seed)
    if first_index < 0 or first_index + num_blocks > _U64:
        raise InputError("index range must fit in unsigned 64-bit integers")
    out = np.empty((num_blocks, count))
    if num_blocks == 0:
        return out
    key = np.array([seed, first_index], dtype=np.uint64)
    bg = Philox(key=key)
    gen = Generator(bg)
    state = bg.state
    zero_counter = np.zeros(4, dtype=np.uint64)
    for r in range(num_blocks):
        key[1] = first_index + r
        state["state"] = {"counter": zero_counter, "key": key}
        state["buffer_pos"] = 4  # discard any buffered raw output
        bg.state = state
        out[r] = gen.standard_normal(count)
    return out
