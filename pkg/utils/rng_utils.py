# Copyright (c) 2024 by Jonathan AW
"""
Purpose: Named random substreams derived from a single run seed.

All randomness in the toolkit flows from one integer seed through named substreams
("datagen", "init", "shuffle", "split", ...). There is no global RNG.
"""

import zlib

import numpy as np

def stream_key(name: str) -> int:
    """Stable 32-bit key for a substream name (crc32 is identical across processes and platforms)."""
    return zlib.crc32(name.encode("utf-8"))

def substream(seed: int, name: str, *counters: int) -> np.random.Generator:
    """
    Return an independent generator for (seed, name, *counters).

    Counters make per-item streams (e.g. per frame) independent of the order in which
    items are produced.
    """
    entropy = [int(seed) & 0xFFFFFFFF, stream_key(name)] + [int(c) for c in counters]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
