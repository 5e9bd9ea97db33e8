"""Domain types shared by all modules.

All types are immutable after construction and validate their invariants
eagerly, so any instance reaching downstream code is well formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

#: tolerance for projector symmetry |M - M^T|_max
SYMMETRY_TOL = 1e-10
#: tolerance for projector idempotence |M M - M|_F and trace(M) - rank
IDEMPOTENCE_TOL = 1e-8


def _as_matrix(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2:
        raise InvalidArgumentError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """A length-T sequence of p-dimensional observations, uniformly sampled.

    `values` has one row per time step and one column per component.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        object.__setattr__(self, "values", _as_matrix(arr, "values"))
        if self.length < 1 or self.components < 1:
            raise InvalidArgumentError("time series must have T >= 1 and p >= 1")

    @property
    def length(self) -> int:
        return self.values.shape[0]

    @property
    def components(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class PatchSet:
    """Sliding-window embeddings: one D = window * components vector per row.

    `times` holds the 1-based source index of each patch; the patch for time t
    contains only observations strictly before t.
    """

    patches: np.ndarray
    times: np.ndarray
    window: int
    components: int

    def __post_init__(self):
        object.__setattr__(self, "patches", _as_matrix(self.patches, "patches"))
        times = np.asarray(self.times, dtype=int)
        if times.ndim != 1 or times.shape[0] != self.patches.shape[0]:
            raise InvalidArgumentError("times must be one index per patch row")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise InvalidArgumentError("times must be strictly increasing")
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        if self.window < 1 or self.components < 1:
            raise InvalidArgumentError("window and components must be >= 1")
        if self.patches.shape[1] != self.window * self.components:
            raise InvalidArgumentError(
                f"patch dimension {self.patches.shape[1]} != window*components "
                f"{self.window * self.components}"
            )

    @property
    def size(self) -> int:
        return self.patches.shape[0]

    @property
    def dim(self) -> int:
        return self.patches.shape[1]

    @staticmethod
    def from_points(points, times=None) -> "PatchSet":
        """Wrap a bare N x D point cloud (window=D, one component)."""
        points = np.asarray(points, dtype=float)
        if times is None:
            times = np.arange(1, points.shape[0] + 1)
        return PatchSet(points, times, window=points.shape[1], components=1)


@dataclass(frozen=True)
class DenoisedSet:
    """Projected points paired 1:1 with the rows of a PatchSet."""

    points: np.ndarray
    times: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", _as_matrix(self.points, "points"))
        times = np.asarray(self.times, dtype=int)
        if times.ndim != 1 or times.shape[0] != self.points.shape[0]:
            raise InvalidArgumentError("times must be one index per point row")
        times.setflags(write=False)
        object.__setattr__(self, "times", times)

    @property
    def size(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class TangentProjector:
    """A D x D orthogonal projector of rank d onto an estimated tangent space.

    Construction checks symmetry (1e-10), idempotence and trace (1e-8); these
    tolerances reflect double-precision eigendecomposition accuracy.
    """

    matrix: np.ndarray
    rank: int

    def __post_init__(self):
        m = _as_matrix(self.matrix, "matrix")
        object.__setattr__(self, "matrix", m)
        if m.shape[0] != m.shape[1]:
            raise InvalidArgumentError("projector matrix must be square")
        if self.rank < 0 or self.rank > m.shape[0]:
            raise InvalidArgumentError(f"rank {self.rank} out of range for D={m.shape[0]}")
        if np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
            raise InvalidArgumentError("projector is not symmetric to 1e-10")
        if np.linalg.norm(m @ m - m) > IDEMPOTENCE_TOL:
            raise InvalidArgumentError("projector is not idempotent to 1e-8")
        if abs(np.trace(m) - self.rank) > IDEMPOTENCE_TOL:
            raise InvalidArgumentError(
                f"projector trace {np.trace(m):.12g} != rank {self.rank}"
            )

    @staticmethod
    def from_basis(basis: np.ndarray) -> "TangentProjector":
        """Build the projector onto the span of orthonormal columns."""
        basis = np.asarray(basis, dtype=float)
        return TangentProjector(basis @ basis.T, rank=basis.shape[1])


@dataclass(frozen=True)
class NoiseSpec:
    """Additive noise description: per-step scale and distribution family.

    `sigma` is a scalar or per-step array of standard-deviation proxies.
    `bounded-uniform` draws from U(-sigma*sqrt(3), sigma*sqrt(3)), which has
    variance sigma^2.
    """

    sigma: float | np.ndarray = 0.0
    distribution: str = "gaussian"

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        if not np.all(np.isfinite(sigma)) or np.any(sigma < 0):
            raise InvalidArgumentError("sigma must be finite and >= 0")
        if sigma.ndim == 0:
            object.__setattr__(self, "sigma", float(sigma))
        else:
            sigma.setflags(write=False)
            object.__setattr__(self, "sigma", sigma)
        if self.distribution not in ("gaussian", "bounded-uniform"):
            raise InvalidArgumentError(
                f"unknown noise distribution {self.distribution!r}"
            )

    def sigma_at(self, t: int) -> float:
        """Scale for 0-based step t."""
        if np.ndim(self.sigma) == 0:
            return float(self.sigma)
        return float(self.sigma[t])

    def sample(self, rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
        """Draw a noise realization of the given (T, ...) shape."""
        if self.distribution == "gaussian":
            draw = rng.standard_normal(shape)
        else:
            draw = rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), size=shape)
        sigma = np.asarray(self.sigma, dtype=float)
        if sigma.ndim == 0:
            return sigma * draw
        if sigma.shape[0] != shape[0]:
            raise InvalidArgumentError(
                f"per-step sigma has length {sigma.shape[0]}, expected {shape[0]}"
            )
        return draw * sigma.reshape((-1,) + (1,) * (len(shape) - 1))


@dataclass
class Diagnostics:
    """Mutable counter sink for non-fatal fallbacks inside the algorithms."""

    counts: dict[str, int] = field(default_factory=dict)
    bandwidths: list[float] = field(default_factory=list)

    def bump(self, name: str, by: int = 1) -> None:
        self.counts[name] = self.counts.get(name, 0) + by
