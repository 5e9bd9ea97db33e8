"""Evaluation harness: rolling-origin backtests and denoising-rate studies."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .errors import InvalidArgumentError
from .forecast import ForecastConfig, predict
from .ldmm import LdmmConfig
from .same import SameConfig
from .synthetic import SyntheticSample, manifold_distance
from .types import DenoisedSet, PatchSet, TimeSeries

__all__ = ["MethodSpec", "ReportRow", "ForecastReport", "CurvePoint", "rmse", "backtest", "denoise_error_curve"]


@dataclass(frozen=True)
class MethodSpec:
    """A named forecasting pipeline to evaluate."""

    name: str
    forecast: ForecastConfig
    denoise: SameConfig | LdmmConfig | None = None


@dataclass(frozen=True)
class ReportRow:
    lookfront: int
    method: str
    rmse: tuple[float, ...]  # one entry per component


@dataclass(frozen=True)
class ForecastReport:
    """Table-shaped backtest result: one row per lookfront x method."""

    rows: tuple[ReportRow, ...]
    lookfronts: tuple[int, ...]
    methods: tuple[str, ...]
    components: int
    holdout: int
    seed: int
    failures: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class CurvePoint:
    T: int
    mean_sq_dist: float
    std: float


def rmse(predictions: np.ndarray, actuals: np.ndarray) -> np.ndarray:
    """Per-component root mean squared error."""
    predictions = np.atleast_2d(np.asarray(predictions, dtype=float))
    actuals = np.atleast_2d(np.asarray(actuals, dtype=float))
    if predictions.shape != actuals.shape:
        raise InvalidArgumentError(
            f"shape mismatch: {predictions.shape} vs {actuals.shape}"
        )
    return np.sqrt(np.mean((predictions - actuals) ** 2, axis=0))


def _forecast_origin(series_values, n, b, method: MethodSpec, m_max: int):
    train = TimeSeries(series_values[:n])
    return predict(train, b, method.forecast, method.denoise, m=m_max)


def backtest(
    series: TimeSeries,
    methods: list[MethodSpec],
    lookfronts: list[int],
    holdout: int,
    b: int,
    seed: int = 0,
    jobs: int = 1,
) -> ForecastReport:
    """Expanding-window backtest over the last `holdout` origins.

    For the origin with training length n (n ranging over the final holdout
    window) each method forecasts up to the largest feasible lookfront; the
    lookfront-m row aggregates errors of the m-th forecast step across all
    origins with n + m <= T, so it covers holdout - m + 1 evaluation points.
    """
    lookfronts = sorted(set(int(m) for m in lookfronts))
    if not lookfronts or lookfronts[0] < 1:
        raise InvalidArgumentError("lookfronts must be positive integers")
    m_top = lookfronts[-1]
    T = series.length
    if holdout < m_top:
        raise InvalidArgumentError(f"holdout {holdout} must cover the max lookfront {m_top}")
    if T - holdout <= b + 1:
        raise InvalidArgumentError("series too short for the requested holdout")
    origins = list(range(T - holdout, T))  # training lengths n

    tasks = []
    for n in origins:
        m_max = min(m_top, T - n)
        for method in methods:
            tasks.append((n, method, m_max))
    results = Parallel(n_jobs=jobs, prefer="processes" if jobs != 1 else None)(
        delayed(_forecast_origin)(series.values, n, b, method, m_max)
        for n, method, m_max in tasks
    )

    failures: list[str] = []
    preds: dict[tuple[str, int], list[np.ndarray]] = {}
    actual: dict[tuple[str, int], list[np.ndarray]] = {}
    for (n, method, m_max), forecast_matrix in zip(tasks, results):
        for m in lookfronts:
            if m > m_max:
                continue
            preds.setdefault((method.name, m), []).append(forecast_matrix[m - 1])
            actual.setdefault((method.name, m), []).append(series.values[n + m - 1])

    rows = []
    for m in lookfronts:
        for method in methods:
            key = (method.name, m)
            err = rmse(np.array(preds[key]), np.array(actual[key]))
            rows.append(ReportRow(lookfront=m, method=method.name, rmse=tuple(float(e) for e in err)))
    return ForecastReport(
        rows=tuple(rows),
        lookfronts=tuple(lookfronts),
        methods=tuple(mth.name for mth in methods),
        components=series.components,
        holdout=holdout,
        seed=seed,
        failures=tuple(failures),
    )


def _curve_trial(factory, T, trial_seed, denoise_fn):
    sample: SyntheticSample = factory(T, trial_seed)
    points = sample.observed.values
    cloud = PatchSet.from_points(points)
    denoised: DenoisedSet = denoise_fn(cloud)
    d = manifold_distance(denoised.points, sample.manifold.tag, sample.manifold.params)
    return float(np.mean(d**2))


def denoise_error_curve(
    factory,
    t_grid: list[int],
    denoise_fn,
    trials: int,
    seed: int = 0,
    jobs: int = 1,
) -> list[CurvePoint]:
    """Mean squared manifold distance of denoised samples across a T grid.

    `factory(T, seed)` builds a SyntheticSample whose observed values are
    points in the manifold's ambient space; `denoise_fn(PatchSet)` returns a
    DenoisedSet.  Per-trial seeds are derived from (seed, T, trial), so
    aggregates do not depend on execution order.
    """
    t_grid = list(t_grid)
    if any(t2 <= t1 for t1, t2 in zip(t_grid, t_grid[1:])):
        raise InvalidArgumentError("T grid must be strictly increasing")
    if trials < 1:
        raise InvalidArgumentError("need at least one trial")
    tasks = [(T, seed * 1_000_003 + 7919 * T + i) for T in t_grid for i in range(trials)]
    values = Parallel(n_jobs=jobs, prefer="processes" if jobs != 1 else None)(
        delayed(_curve_trial)(factory, T, s, denoise_fn) for T, s in tasks
    )
    out = []
    for j, T in enumerate(t_grid):
        chunk = np.array(values[j * trials : (j + 1) * trials])
        out.append(CurvePoint(T=T, mean_sq_dist=float(chunk.mean()), std=float(chunk.std())))
    return out
