"""Exponentially-discounted kernel-weighted k-NN forecasting.

The one-step rule forecasts the next observation as the last one plus a
weighted average of historical one-step increments,

    Z_hat[T+1] = Z[T] + sum_t w_t (Z[t] - Z[t-1]) / sum_t w_t,
    w_t = exp(-(T+1-t)/tau) * epanechnikov(|x_query - x_t| / h_k),

where distances live in the (optionally denoised) patch space and h_k is the
k-th smallest distance from the query to the historical points.  Multi-step
forecasts recurse, appending each forecast to the series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .kernels import epanechnikov
from .ldmm import LdmmConfig, ldmm_denoise
from .same import SameConfig, same_denoise
from .types import Diagnostics, DenoisedSet, PatchSet, TimeSeries
from .windowing import embed

__all__ = ["ForecastConfig", "knn_weights", "one_step_forecast", "predict"]


@dataclass(frozen=True)
class ForecastConfig:
    """Neighbour count (scalar or per component), discount, and denoiser choice."""

    k: int | tuple[int, ...] = 10
    tau: float = 20.0
    denoiser: str = "none"

    def __post_init__(self):
        k = self.k
        if isinstance(k, (list, np.ndarray)):
            k = tuple(int(v) for v in k)
            object.__setattr__(self, "k", k)
        if isinstance(k, tuple):
            if not k or any(v < 1 for v in k):
                raise InvalidArgumentError("every neighbour count must be >= 1")
        elif int(k) < 1:
            raise InvalidArgumentError("neighbour count must be >= 1")
        if not self.tau > 0:
            raise InvalidArgumentError("discount tau must be positive")
        if self.denoiser not in ("same", "ldmm", "none"):
            raise InvalidArgumentError(f"unknown denoiser {self.denoiser!r}")

    def k_for(self, component: int, components: int) -> int:
        if isinstance(self.k, tuple):
            if len(self.k) != components:
                raise InvalidArgumentError(
                    f"{len(self.k)} neighbour counts for {components} components"
                )
            return self.k[component]
        return int(self.k)


def knn_weights(
    query: np.ndarray,
    history: DenoisedSet,
    query_time: int,
    k: int,
    tau: float,
    diagnostics: Diagnostics | None = None,
) -> np.ndarray:
    """Discounted Epanechnikov weights over the historical points.

    h_k is the k-th smallest distance from the query, so at most k-1 points
    get a strictly positive kernel factor (the k-th sits on the support
    boundary).  If h_k is zero, or every kernel factor vanishes through
    ties, the weights fall back to a uniform kernel over the k nearest
    points (ties broken by earlier time) with the recency discount kept,
    and the fallback is counted.
    """
    n = history.size
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"k={k} out of range for {n} historical points")
    if not tau > 0:
        raise InvalidArgumentError("tau must be positive")
    query = np.asarray(query, dtype=float)
    dist = np.linalg.norm(history.points - query, axis=1)
    order = np.lexsort((history.times, dist))
    h_k = dist[order[k - 1]]
    diag = diagnostics if diagnostics is not None else Diagnostics()
    discount = np.exp(-(query_time - history.times.astype(float)) / tau)
    if h_k > 0.0:
        w = discount * epanechnikov(dist / h_k)
        if w.sum() > 0.0:
            return w
    diag.bump("knn_uniform_fallback")
    w = np.zeros(n)
    nearest = order[:k]
    w[nearest] = discount[nearest]
    return w


def one_step_forecast(
    series: TimeSeries, weights: np.ndarray, patch_times: np.ndarray
) -> np.ndarray:
    """Last observation plus the weighted average of historical increments.

    `patch_times` are 1-based times t with b+1 <= t <= T; weight w_t applies
    to the increment Z[t] - Z[t-1].  A zero weight sum here is a contract
    violation: callers must have applied the uniform fallback already.
    """
    weights = np.asarray(weights, dtype=float)
    patch_times = np.asarray(patch_times, dtype=int)
    if weights.shape != patch_times.shape:
        raise InvalidArgumentError("weights and patch_times must align")
    total = weights.sum()
    if not total > 0:
        raise InvalidArgumentError("zero weight sum reached the forecast rule")
    Z = series.values
    increments = Z[patch_times - 1] - Z[patch_times - 2]
    return Z[-1] + (weights @ increments) / total


def _denoise(patches: PatchSet, method: str, cfg, diagnostics: Diagnostics | None):
    if method == "none":
        return DenoisedSet(patches.patches, patches.times)
    if method == "same":
        if not isinstance(cfg, SameConfig):
            raise InvalidArgumentError("denoiser 'same' needs a SameConfig")
        return same_denoise(patches, cfg, diagnostics=diagnostics)[0]
    if not isinstance(cfg, LdmmConfig):
        raise InvalidArgumentError("denoiser 'ldmm' needs an LdmmConfig")
    return ldmm_denoise(patches, cfg, diagnostics=diagnostics)


def predict(
    series: TimeSeries,
    b: int,
    cfg: ForecastConfig,
    denoise_cfg: SameConfig | LdmmConfig | None = None,
    m: int = 1,
    freeze_denoise: bool = False,
    diagnostics: Diagnostics | None = None,
) -> np.ndarray:
    """Recursive m-step forecast; returns an m x p matrix.

    Each step embeds the current series with the query patch included, runs
    the configured denoiser over the full patch set, computes per-component
    weights (shared distances, per-component h_k), forecasts one step, and
    appends the forecast.  With `freeze_denoise`, the denoiser runs only on
    the first step; later steps reuse the frozen estimates and take new
    patches raw.
    """
    if m < 1:
        raise InvalidArgumentError("lookfront must be >= 1")
    if cfg.denoiser != "none" and denoise_cfg is None:
        raise InvalidArgumentError(f"denoiser {cfg.denoiser!r} requires its config")
    p = series.components
    values = series.values
    out = np.empty((m, p))
    frozen: DenoisedSet | None = None
    for step in range(m):
        current = TimeSeries(values)
        patches = embed(current, b, include_query=True)
        if freeze_denoise and frozen is not None:
            keep = frozen.size
            points = np.vstack([frozen.points, patches.patches[keep:]])
            denoised = DenoisedSet(points, patches.times)
        else:
            denoised = _denoise(patches, cfg.denoiser, denoise_cfg, diagnostics)
            if freeze_denoise:
                frozen = denoised
        query = denoised.points[-1]
        query_time = int(denoised.times[-1])
        history = DenoisedSet(denoised.points[:-1], denoised.times[:-1])
        forecast = np.empty(p)
        for c in range(p):
            k_c = cfg.k_for(c, p)
            if k_c > history.size:
                raise InvalidArgumentError(
                    f"k={k_c} exceeds the {history.size} available historical patches"
                )
            w = knn_weights(query, history, query_time, k_c, cfg.tau, diagnostics)
            forecast[c] = one_step_forecast(current, w, history.times)[c]
        out[step] = forecast
        values = np.vstack([values, forecast])
    return out
