"""Synthetic latent-manifold generators with ground-truth access.

Three families:

* autoregressive series, whose noise-free window patches live on a linear
  subspace of patch space (the image of the companion matrix);
* central-subspace recursions Z[t] = g(Phi^T Z[t-1]) + noise, whose latent
  states live on the graph of g o Phi^T;
* Markov chains on the unit circle, either an ergodic angular random walk
  or a non-mixing golden-ratio rotation (equidistributed but periodic-like).

Every generator is seeded and bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError, NumericalDivergenceError
from .rng import substream
from .types import NoiseSpec, TimeSeries

__all__ = [
    "ManifoldSpec",
    "SyntheticSample",
    "gen_ar",
    "gen_central_subspace",
    "gen_circle_chain",
    "manifold_distance",
    "make_sample",
]

#: rotation step of the non-mixing chain, as a fraction of the full turn
GOLDEN_ROTATION = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ManifoldSpec:
    """Ground-truth manifold identifier plus whatever its metric needs."""

    tag: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SyntheticSample:
    """Observed series plus the latent states it was built from.

    `latent` lives in the generator's natural space (documented per
    generator); `latent_times` aligns its rows with 1-based series time.
    """

    observed: TimeSeries
    latent: np.ndarray
    latent_times: np.ndarray
    manifold: ManifoldSpec
    noise: NoiseSpec
    seed: int


def gen_ar(
    coeffs,
    T: int,
    noise: NoiseSpec,
    seed: int,
    init=None,
    window: int | None = None,
) -> SyntheticSample:
    """Univariate autoregression Z[t] = sum_i a_i Z[t-i] + xi_t.

    `init` seeds the first len(coeffs) values (default zeros).  The latent
    states are the conditional-mean patches in a `window`-dimensional patch
    space (newest first, default len(coeffs)+1): every noise-free patch
    satisfies v_1 = sum_i a_i v_{1+i}, a hyperplane through the origin, and
    the manifold metric is the distance to that subspace.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    order = coeffs.size
    if order < 1:
        raise InvalidArgumentError("need at least one AR coefficient")
    if T <= order:
        raise InvalidArgumentError(f"series length {T} must exceed the order {order}")
    w = window if window is not None else order + 1
    if w <= order:
        raise InvalidArgumentError(f"window {w} must exceed the order {order}")
    rng = substream(seed, "generator/ar")
    z = np.zeros(T)
    if init is not None:
        init = np.asarray(init, dtype=float).ravel()
        if init.size != order:
            raise InvalidArgumentError(f"init must have length {order}")
        z[:order] = init
    xi = noise.sample(rng, (T,))
    for t in range(order, T):
        z[t] = coeffs @ z[t - 1 - np.arange(order)] + xi[t]

    # latent patch for time t: conditional mean of (Z[t-1], ..., Z[t-w]).
    times = np.arange(w + 2, T + 2)
    latent = np.empty((times.size, w))
    for i, t in enumerate(times):
        past = z[t - 2 - np.arange(w)]  # Z[t-2] .. Z[t-w-1], newest first
        latent[i, 0] = coeffs @ past[:order]
        latent[i, 1:] = past[: w - 1]
    return SyntheticSample(
        observed=TimeSeries(z[:, None]),
        latent=latent,
        latent_times=times,
        manifold=ManifoldSpec("line-subspace", {"ar_coeffs": coeffs.tolist()}),
        noise=noise,
        seed=seed,
    )


def gen_central_subspace(
    Phi: np.ndarray,
    g: Callable[[np.ndarray], np.ndarray],
    T: int,
    noise: NoiseSpec,
    seed: int,
    init=None,
) -> SyntheticSample:
    """Central-subspace recursion Z[t] = g(Phi^T Z[t-1]) + xi_t.

    Latent states X[t] = (Z[t-1], g(Phi^T Z[t-1])) live on the graph of
    g o Phi^T in R^(2p); observing them adds (0, xi_t).
    """
    Phi = np.asarray(Phi, dtype=float)
    if Phi.ndim != 2:
        raise InvalidArgumentError("Phi must be a p x d matrix")
    p, d = Phi.shape
    if np.linalg.matrix_rank(Phi) < d:
        raise InvalidArgumentError("Phi must have full column rank")
    rng = substream(seed, "generator/central-subspace")
    prev = np.zeros(p) if init is None else np.asarray(init, dtype=float).ravel()
    if prev.size != p:
        raise InvalidArgumentError(f"init must have length {p}")
    xi = noise.sample(rng, (T, p))
    z = np.empty((T, p))
    latent = np.empty((T, 2 * p))
    for t in range(T):
        mapped = np.asarray(g(Phi.T @ prev), dtype=float).ravel()
        if mapped.size != p or not np.all(np.isfinite(mapped)):
            raise NumericalDivergenceError(t, what="recursion value")
        latent[t, :p] = prev
        latent[t, p:] = mapped
        z[t] = mapped + xi[t]
        prev = z[t]
    return SyntheticSample(
        observed=TimeSeries(z),
        latent=latent,
        latent_times=np.arange(1, T + 1),
        manifold=ManifoldSpec("graph-of-g", {"Phi": Phi, "g": g}),
        noise=noise,
        seed=seed,
    )


def gen_circle_chain(
    step_kappa: float,
    T: int,
    noise: NoiseSpec,
    seed: int,
    mixing: str = "ergodic",
    jitter: float = 1e-3,
) -> SyntheticSample:
    """Markov chain on the unit circle, observed with additive noise.

    `ergodic`: angular random walk with wrapped-gaussian increments of
    concentration `step_kappa` (variance 1/step_kappa), started uniformly.
    `periodic`: deterministic rotation by the golden fraction of a turn plus
    a small gaussian angular jitter; equidistributed but non-mixing.
    """
    if T < 1:
        raise InvalidArgumentError("T must be >= 1")
    if mixing not in ("ergodic", "periodic"):
        raise InvalidArgumentError(f"unknown mixing regime {mixing!r}")
    rng = substream(seed, f"generator/circle-{mixing}")
    theta = np.empty(T)
    theta[0] = rng.uniform(0.0, 2.0 * np.pi)
    if mixing == "ergodic":
        if not step_kappa > 0:
            raise InvalidArgumentError("step_kappa must be positive")
        steps = rng.normal(0.0, 1.0 / np.sqrt(step_kappa), size=T - 1)
    else:
        steps = 2.0 * np.pi * GOLDEN_ROTATION + jitter * rng.standard_normal(T - 1)
    theta[1:] = theta[0] + np.cumsum(steps)
    latent = np.column_stack([np.cos(theta), np.sin(theta)])
    observed = latent + noise.sample(rng, (T, 2))
    return SyntheticSample(
        observed=TimeSeries(observed),
        latent=latent,
        latent_times=np.arange(1, T + 1),
        manifold=ManifoldSpec("circle", {}),
        noise=noise,
        seed=seed,
    )


def _subspace_projector(params: dict, dim: int) -> np.ndarray:
    if "projector" in params:
        return np.asarray(params["projector"], dtype=float)
    if "basis" in params:
        basis = np.asarray(params["basis"], dtype=float)
        q, _ = np.linalg.qr(basis)
        return q @ q.T
    if "ar_coeffs" in params:
        coeffs = np.asarray(params["ar_coeffs"], dtype=float)
        if dim <= coeffs.size:
            raise InvalidArgumentError(
                f"points of dimension {dim} cannot satisfy an order-{coeffs.size} relation"
            )
        normal = np.zeros(dim)
        normal[0] = 1.0
        normal[1 : coeffs.size + 1] = -coeffs
        normal /= np.linalg.norm(normal)
        return np.eye(dim) - np.outer(normal, normal)
    raise InvalidArgumentError("line-subspace needs 'projector', 'basis', or 'ar_coeffs'")


def _graph_residuals(points: np.ndarray, params: dict) -> np.ndarray:
    Phi = np.asarray(params["Phi"], dtype=float)
    g = params["g"]
    p = Phi.shape[0]
    if points.shape[1] != 2 * p:
        raise InvalidArgumentError(
            f"graph-of-g expects dimension {2 * p}, got {points.shape[1]}"
        )
    first, second = points[:, :p], points[:, p:]
    res = np.empty(points.shape[0])
    for i in range(points.shape[0]):
        res[i] = np.linalg.norm(second[i] - np.asarray(g(Phi.T @ first[i])).ravel())
    return res


def _graph_exact_1d(points: np.ndarray, params: dict, grid: int = 10_000) -> np.ndarray:
    """Exact distance to the curve (u, g(Phi u)) for 1-D latents.

    Dense grid search over the feasible interval |u - x1| <= surrogate
    residual, then one parabolic refinement pass.
    """
    Phi = np.asarray(params["Phi"], dtype=float)
    g = params["g"]
    if Phi.shape != (1, 1):
        raise InvalidArgumentError("exact graph distance is available only for d = p = 1")
    phi = float(Phi[0, 0])
    res = _graph_residuals(points, params)
    out = np.empty(points.shape[0])

    def curve(us):
        return np.asarray([np.asarray(g(phi * u)).reshape(-1)[0] for u in us])

    for i, (x1, x2) in enumerate(points):
        span = res[i] + 1e-12
        us = np.linspace(x1 - span, x1 + span, grid)
        d2 = (x1 - us) ** 2 + (x2 - curve(us)) ** 2
        j = int(np.argmin(d2))
        lo, hi = max(j - 1, 0), min(j + 1, grid - 1)
        fine = np.linspace(us[lo], us[hi], grid)
        d2f = (x1 - fine) ** 2 + (x2 - curve(fine)) ** 2
        out[i] = np.sqrt(d2f.min())
    return out


def manifold_distance(points, tag: str, params: dict | None = None, exact: bool = False):
    """Distance of each point to the tagged ground-truth manifold.

    circle: | |x| - 1 |.  line-subspace: norm of the component orthogonal to
    the subspace.  graph-of-g: the plug-in residual |x2 - g(Phi^T x1)|, an
    upper-bound surrogate; pass `exact=True` (1-D latents only) for the true
    distance by grid minimization.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[None, :]
    params = params or {}
    if tag == "circle":
        if points.shape[1] != 2:
            raise InvalidArgumentError("circle distance expects points in the plane")
        return np.abs(np.linalg.norm(points, axis=1) - 1.0)
    if tag == "line-subspace":
        proj = _subspace_projector(params, points.shape[1])
        return np.linalg.norm(points - points @ proj.T, axis=1)
    if tag == "graph-of-g":
        if exact:
            return _graph_exact_1d(points, params)
        return _graph_residuals(points, params)
    raise InvalidArgumentError(f"unknown manifold tag {tag!r}")


def make_sample(kind: str, T: int, sigma, seed: int, **params) -> SyntheticSample:
    """Dispatch a generator by name with a shared parameter vocabulary."""
    dist = params.pop("distribution", "gaussian")
    noise = NoiseSpec(sigma=sigma, distribution=dist)
    if kind == "circle":
        return gen_circle_chain(
            step_kappa=params.pop("step_kappa", 25.0),
            T=T,
            noise=noise,
            seed=seed,
            mixing=params.pop("mixing", "ergodic"),
            jitter=params.pop("jitter", 1e-3),
        )
    if kind == "ar":
        return gen_ar(
            coeffs=params.pop("coeffs", [0.6, 0.3]),
            T=T,
            noise=noise,
            seed=seed,
            init=params.pop("init", None),
            window=params.pop("window", None),
        )
    raise InvalidArgumentError(f"unknown synthetic kind {kind!r}")
