"""Structure-adaptive manifold denoising.

Iterates projector-weighted local averaging against the *original* points
with a geometrically shrinking bandwidth, refitting the tangent projectors
from the current estimates between passes:

    pass k:  w_ij = K0(|P_i (y_i - y_j)|^2 / h_k^2) * 1(|y_i - y_j| <= tau0)
             u_i  = sum_j w_ij y_j / sum_j w_ij
             refit P_i from {u_j : |u_j - u_i| <= gamma h_k}   (if not last)
             h_{k+1} = h_k / a

The 1/(N h^d) weight normalization cancels in the average and is omitted;
test oracles rely on that.  The self-weight (j = i term) is kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateNeighborhoodError, InvalidArgumentError
from .kernels import heat_quarter, heat_quarter_squared
from .types import Diagnostics, DenoisedSet, PatchSet, TangentProjector

__all__ = ["SameConfig", "default_bandwidth", "init_projectors", "same_weights", "same_denoise"]

_KERNELS = {"quarter": heat_quarter, "quarter-squared": heat_quarter_squared}


@dataclass(frozen=True)
class SameConfig:
    """Parameters of the adaptive-averaging denoiser.

    `iterations` counts total passes (K+1).  `h0=None` selects the default
    bandwidth: the median over points of the distance to the ceil(sqrt(N))-th
    nearest neighbour, which keeps first-pass neighbourhoods populated.
    `kernel` picks the weight-kernel convention; both act on the squared
    ratio |P dy|^2/h^2 ("quarter" = exp(-x/4), "quarter-squared" = exp(-x^2/4)).
    """

    d: int = 1
    iterations: int = 21
    h0: float | None = None
    tau0: float = 1.0
    a: float = 1.25
    gamma: float = 1.5
    kernel: str = "quarter"

    def __post_init__(self):
        if self.d < 1:
            raise InvalidArgumentError(f"manifold dimension must be >= 1, got {self.d}")
        if self.iterations < 1:
            raise InvalidArgumentError("iterations must be >= 1")
        if self.h0 is not None and not self.h0 > 0:
            raise InvalidArgumentError("h0 must be positive")
        if not self.tau0 > 0:
            raise InvalidArgumentError("tau0 must be positive")
        if not self.a > 1:
            raise InvalidArgumentError("bandwidth decay factor a must be > 1")
        if not self.gamma > 0:
            raise InvalidArgumentError("gamma must be positive")
        if self.kernel not in _KERNELS:
            raise InvalidArgumentError(f"unknown kernel {self.kernel!r}")


def _pairwise_distances(points: np.ndarray) -> np.ndarray:
    sq = np.sum(points * points, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * points @ points.T
    np.maximum(d2, 0.0, out=d2)
    return np.sqrt(d2)


def default_bandwidth(patches: PatchSet) -> float:
    """Median over points of the distance to the ceil(sqrt(N))-th neighbour."""
    n = patches.size
    if n < 2:
        raise InvalidArgumentError("need at least 2 points for a data-driven bandwidth")
    k = min(int(np.ceil(np.sqrt(n))), n - 1)
    dist = _pairwise_distances(patches.patches)
    kth = np.partition(dist, k, axis=1)[:, k]  # column 0 is the self-distance
    h = float(np.median(kth))
    if h <= 0:
        raise InvalidArgumentError("degenerate point set: data-driven bandwidth is 0")
    return h


def _top_d_projector(scatter: np.ndarray, d: int) -> TangentProjector | None:
    """Projector onto the top-d eigenvectors, or None if the spectrum is degenerate."""
    evals, evecs = np.linalg.eigh(scatter)
    top = evals[::-1][:d]
    if top.size < d or not np.all(np.isfinite(top)) or top[-1] <= 0:
        return None
    basis = evecs[:, ::-1][:, :d]
    return TangentProjector.from_basis(basis)


def init_projectors(patches: PatchSet, cfg: SameConfig) -> list[TangentProjector]:
    """Local-PCA tangent projectors over tau0-balls.

    For each point, the scatter matrix of its tau0-neighbourhood (self
    included) is centered at the neighbourhood mean and the projector onto
    its top-d eigenvectors is returned.  A point whose ball holds fewer than
    d+1 points is reported as degenerate.
    """
    Y = patches.patches
    n = patches.size
    dist = _pairwise_distances(Y)
    out: list[TangentProjector] = []
    for i in range(n):
        idx = np.flatnonzero(dist[i] <= cfg.tau0)
        if idx.size < cfg.d + 1:
            raise DegenerateNeighborhoodError(i, idx.size, cfg.d + 1, cfg.tau0)
        local = Y[idx] - Y[idx].mean(axis=0)
        proj = _top_d_projector(local.T @ local, cfg.d)
        if proj is None:
            raise DegenerateNeighborhoodError(i, idx.size, cfg.d + 1, cfg.tau0)
        out.append(proj)
    return out


def same_weights(
    patches: PatchSet,
    projectors: list[TangentProjector],
    h: float,
    tau0: float,
    kernel: str = "quarter",
) -> np.ndarray:
    """N x N weight matrix of one averaging pass.

    Row i holds K0(|P_i (y_i - y_j)|^2 / h^2) gated by the hard threshold
    |y_i - y_j| <= tau0.  The diagonal is K0(0) = 1.  Not symmetric in
    general because each row uses its own projector.
    """
    if not h > 0:
        raise InvalidArgumentError(f"bandwidth must be positive, got {h}")
    Y = patches.patches
    n = patches.size
    if len(projectors) != n:
        raise InvalidArgumentError(
            f"{len(projectors)} projectors for {n} patches; need one per patch"
        )
    k0 = _KERNELS[kernel]
    dist = _pairwise_distances(Y)
    w = np.zeros((n, n))
    h_sq = h * h
    for i in range(n):
        diff = Y[i] - Y  # N x D
        proj_sq = np.sum((diff @ projectors[i].matrix) * diff, axis=1)
        np.maximum(proj_sq, 0.0, out=proj_sq)
        w[i] = k0(proj_sq / h_sq)
    w[dist > tau0] = 0.0
    return w


def same_denoise(
    patches: PatchSet,
    cfg: SameConfig,
    initial_projectors: list[TangentProjector] | None = None,
    diagnostics: Diagnostics | None = None,
) -> tuple[DenoisedSet, list[TangentProjector]]:
    """Run all passes and return the final estimates and projectors.

    Weights are always computed against the original points; only the refit
    neighbourhoods use the current estimates.  A degenerate refit keeps the
    previous projector for that point, and a zero weight row falls back to
    the original point; both are counted in `diagnostics`, not fatal.
    """
    if patches.size < 1:
        raise InvalidArgumentError("patch set is empty")
    Y = patches.patches
    n = patches.size
    h = cfg.h0 if cfg.h0 is not None else default_bandwidth(patches)
    projectors = (
        list(initial_projectors) if initial_projectors is not None
        else init_projectors(patches, cfg)
    )
    if len(projectors) != n:
        raise InvalidArgumentError("need one initial projector per patch")
    diag = diagnostics if diagnostics is not None else Diagnostics()

    U = Y
    last = cfg.iterations - 1
    for k in range(cfg.iterations):
        diag.bandwidths.append(h)
        w = same_weights(patches, projectors, h, cfg.tau0, cfg.kernel)
        row_sums = w.sum(axis=1)
        dead = row_sums <= 0
        if np.any(dead):
            diag.bump("zero_weight_rows", int(np.count_nonzero(dead)))
            row_sums[dead] = 1.0
        U = (w @ Y) / row_sums[:, None]
        U[dead] = Y[dead]

        if k < last:
            radius = cfg.gamma * h
            dist_u = _pairwise_distances(U)
            refitted: list[TangentProjector] = []
            for t in range(n):
                idx = np.flatnonzero(dist_u[t] <= radius)
                diffs = U[idx] - U[t]
                proj = _top_d_projector(diffs.T @ diffs, cfg.d)
                if proj is None:
                    diag.bump("projector_refit_fallback")
                    proj = projectors[t]
                refitted.append(proj)
            projectors = refitted
            h /= cfg.a

    return DenoisedSet(U, patches.times), projectors
