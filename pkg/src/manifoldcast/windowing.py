"""Sliding-window patch embeddings.

A patch for time t stacks, per component, the b most recent observations
strictly before t (newest first), concatenated component-major: the patch
vector is (Z[t-1,1], ..., Z[t-b,1], Z[t-1,2], ..., Z[t-b,2], ...).  Pairwise
distances are invariant to this ordering choice, so any fixed convention is
equivalent; this one keeps each component's window contiguous.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .types import PatchSet, TimeSeries

__all__ = ["embed", "unembed_time"]


def embed(series: TimeSeries, b: int, include_query: bool = False) -> PatchSet:
    """Embed a series into its b-sample sliding-window patch set.

    Produces patches for times t = b+1 .. T, plus t = T+1 (the query patch,
    built entirely from observed data) when `include_query` is set.
    """
    if b < 1:
        raise InvalidArgumentError(f"window length must be >= 1, got {b}")
    T = series.length
    if b >= T:
        raise InvalidArgumentError(f"window length {b} must be < series length {T}")
    Z = series.values
    p = series.components
    last = T + 1 if include_query else T
    times = np.arange(b + 1, last + 1)
    n = times.size
    patches = np.empty((n, b * p))
    for i, t in enumerate(times):
        # rows t-2 .. t-b-1 in 0-based storage, newest first
        window = Z[t - b - 1 : t - 1][::-1]
        patches[i] = window.T.reshape(-1)
    return PatchSet(patches, times, window=b, components=p)


def unembed_time(patch_index: int, patchset: PatchSet) -> int:
    """Source time index of the given patch row."""
    n = patchset.size
    if not -n <= patch_index < n:
        raise IndexError(f"patch index {patch_index} out of range for {n} patches")
    return int(patchset.times[patch_index])
