"""Smoothing kernels used by the denoisers and the forecaster.

All kernels are pure functions, nonnegative, and nonincreasing in their
distance argument.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError

__all__ = ["epanechnikov", "heat_kernel", "heat_quarter", "heat_quarter_squared"]


def epanechnikov(u):
    """Epanechnikov kernel 3/4 * (1 - u^2)_+ for u >= 0.

    Compactly supported: returns exactly 0 for u >= 1.  Accepts scalars or
    arrays; negative or non-finite input is rejected.
    """
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)) or np.any(u < 0):
        raise InvalidArgumentError("epanechnikov argument must be finite and >= 0")
    out = 0.75 * np.maximum(0.0, 1.0 - u * u)
    return float(out) if out.ndim == 0 else out


def heat_kernel(sq_dist, h_sq):
    """Gaussian affinity exp(-sq_dist / h_sq) on squared distances.

    This is the convention used for graph affinities; `h_sq` is the squared
    bandwidth and must be positive.
    """
    if not np.isfinite(h_sq) or h_sq <= 0:
        raise InvalidArgumentError(f"h_sq must be positive, got {h_sq!r}")
    sq_dist = np.asarray(sq_dist, dtype=float)
    if not np.all(np.isfinite(sq_dist)) or np.any(sq_dist < 0):
        raise InvalidArgumentError("sq_dist must be finite and >= 0")
    out = np.exp(-sq_dist / h_sq)
    return float(out) if out.ndim == 0 else out


def heat_quarter(x):
    """exp(-x/4) on a normalized squared-distance argument.

    Default weight kernel for the projector-weighted averaging: feeding it
    x = |P (y_i - y_j)|^2 / h^2 is the same as evaluating exp(-t^2/4) at the
    distance ratio t = |P (y_i - y_j)| / h.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise InvalidArgumentError("argument must be finite and >= 0")
    out = np.exp(-x / 4.0)
    return float(out) if out.ndim == 0 else out


def heat_quarter_squared(x):
    """exp(-x^2/4) on a normalized squared-distance argument.

    Alternative convention: applies exp(-t^2/4) directly to the squared ratio
    x = |P (y_i - y_j)|^2 / h^2, which makes the weight quartic in distance.
    Exposed so callers can select either convention; `heat_quarter` is the
    default elsewhere.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise InvalidArgumentError("argument must be finite and >= 0")
    out = np.exp(-x * x / 4.0)
    return float(out) if out.ndim == 0 else out
