"""Service layer shared by the HTTP endpoints and the CLI.

Each handler takes a validated request model and returns a response model;
all numerical work is delegated to the core package.
"""

from __future__ import annotations

import numpy as np

from .. import __version__
from ..bench import MethodSpec, backtest, denoise_error_curve
from ..errors import InvalidArgumentError
from ..forecast import predict
from ..io import config_hash
from ..ldmm import ldmm_denoise
from ..same import same_denoise
from ..synthetic import make_sample
from ..types import TimeSeries
from .schemas import (
    BacktestRequest,
    BacktestResponse,
    ForecastRequest,
    ForecastResponse,
    Provenance,
    RatePointModel,
    RateStudyRequest,
    RateStudyResponse,
    ReportRowModel,
    RunConfig,
)


def _provenance(config: RunConfig) -> Provenance:
    return Provenance(
        config_sha256=config_hash(config.model_dump(mode="json")),
        seed=config.seed,
        version=__version__,
    )


def _scale(series: TimeSeries) -> tuple[TimeSeries, np.ndarray, np.ndarray]:
    mean = series.values.mean(axis=0)
    std = series.values.std(axis=0)
    std[std == 0] = 1.0
    return TimeSeries((series.values - mean) / std), mean, std


def run_forecast(request: ForecastRequest) -> ForecastResponse:
    cfg = request.config
    series = TimeSeries(np.asarray(request.series, dtype=float))
    mean = std = None
    if cfg.window.scale:
        series, mean, std = _scale(series)
    forecasts = predict(
        series,
        b=cfg.window.length,
        cfg=cfg.forecast.to_config(cfg.denoiser.method),
        denoise_cfg=cfg.denoiser.to_config(),
        m=request.lookfront,
        freeze_denoise=cfg.forecast.freeze_denoise,
    )
    if mean is not None:
        forecasts = forecasts * std + mean
    return ForecastResponse(
        forecasts=[[float(v) for v in row] for row in forecasts],
        provenance=_provenance(cfg),
    )


def _resolve_series(request: BacktestRequest) -> TimeSeries:
    if request.series is not None:
        return TimeSeries(np.asarray(request.series, dtype=float))
    syn = request.config.synthetic
    sample = make_sample(
        syn.kind, syn.length, syn.sigma, request.config.seed, **syn.generator_params()
    )
    return sample.observed


def run_backtest(request: BacktestRequest, jobs: int = 1) -> BacktestResponse:
    cfg = request.config
    series = _resolve_series(request)
    if cfg.window.scale:
        series, _, _ = _scale(series)
    methods = [
        MethodSpec(
            name=method,
            forecast=cfg.forecast.to_config(method),
            denoise=(
                cfg.denoiser.same.to_config() if method == "same"
                else cfg.denoiser.ldmm.to_config() if method == "ldmm"
                else None
            ),
        )
        for method in cfg.backtest.methods
    ]
    report = backtest(
        series,
        methods,
        lookfronts=cfg.backtest.lookfronts,
        holdout=cfg.backtest.holdout,
        b=cfg.window.length,
        seed=cfg.seed,
        jobs=jobs,
    )
    rows = [
        ReportRowModel(lookfront=r.lookfront, method=r.method, rmse=list(r.rmse))
        for r in report.rows
    ]
    return BacktestResponse(
        config=cfg.model_dump(mode="json"),
        rows=rows,
        provenance=_provenance(cfg),
    )


def run_ratestudy(request: RateStudyRequest, jobs: int = 1) -> RateStudyResponse:
    cfg = request.config
    syn = cfg.synthetic
    if syn.kind != "circle":
        raise InvalidArgumentError("rate studies are defined for the circle generator")
    params = syn.generator_params()

    def factory(T: int, seed: int):
        return make_sample("circle", T, syn.sigma, seed, **dict(params))

    method = cfg.denoiser.method
    denoise_cfg = cfg.denoiser.to_config()

    def denoise_fn(cloud):
        if method == "same":
            return same_denoise(cloud, denoise_cfg)[0]
        if method == "ldmm":
            return ldmm_denoise(cloud, denoise_cfg)
        from ..types import DenoisedSet

        return DenoisedSet(cloud.patches, cloud.times)

    points = denoise_error_curve(
        factory,
        cfg.ratestudy.t_grid,
        denoise_fn,
        trials=cfg.ratestudy.trials,
        seed=cfg.seed,
        jobs=jobs,
    )
    return RateStudyResponse(
        rows=[RatePointModel(T=p.T, mean_sq_dist=p.mean_sq_dist, std=p.std) for p in points],
        provenance=_provenance(cfg),
    )
