"""Deterministic RNG substreams.

Every random draw in the package flows from one master seed through a named
substream, so that independent work items (trials, origins, generators) get
decorrelated, order-independent streams.
"""

from __future__ import annotations

import zlib

import numpy as np


def substream(seed: int, name: str) -> np.random.Generator:
    """Generator for the substream `name` derived from the master seed."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, zlib.crc32(name.encode("utf-8"))])
