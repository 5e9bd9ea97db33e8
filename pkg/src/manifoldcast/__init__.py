"""Manifold-denoised nearest-neighbour forecasting for multivariate time series."""

from .bench import CurvePoint, ForecastReport, MethodSpec, ReportRow, backtest, denoise_error_curve, rmse
from .errors import (
    ConfigError,
    DegenerateNeighborhoodError,
    InvalidArgumentError,
    ManifoldcastError,
    NumericalDivergenceError,
    NumericalError,
    ParseError,
    SolverError,
)
from .forecast import ForecastConfig, knn_weights, one_step_forecast, predict
from .kernels import epanechnikov, heat_kernel, heat_quarter, heat_quarter_squared
from .ldmm import (
    LdmmConfig,
    affinity_matrix,
    bregman_solve_v,
    bregman_update_u,
    default_h_sq,
    graph_laplacian,
    ldmm_denoise,
)
from .same import SameConfig, default_bandwidth, init_projectors, same_denoise, same_weights
from .synthetic import (
    ManifoldSpec,
    SyntheticSample,
    gen_ar,
    gen_central_subspace,
    gen_circle_chain,
    make_sample,
    manifold_distance,
)
from .types import Diagnostics, DenoisedSet, NoiseSpec, PatchSet, TangentProjector, TimeSeries
from .windowing import embed, unembed_time

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # types
    "TimeSeries", "PatchSet", "DenoisedSet", "TangentProjector", "NoiseSpec", "Diagnostics",
    # kernels
    "epanechnikov", "heat_kernel", "heat_quarter", "heat_quarter_squared",
    # windowing
    "embed", "unembed_time",
    # denoisers
    "SameConfig", "default_bandwidth", "init_projectors", "same_weights", "same_denoise",
    "LdmmConfig", "default_h_sq", "affinity_matrix", "graph_laplacian",
    "bregman_solve_v", "bregman_update_u", "ldmm_denoise",
    # forecasting
    "ForecastConfig", "knn_weights", "one_step_forecast", "predict",
    # synthetic
    "ManifoldSpec", "SyntheticSample", "gen_ar", "gen_central_subspace",
    "gen_circle_chain", "manifold_distance", "make_sample",
    # bench
    "MethodSpec", "ReportRow", "ForecastReport", "CurvePoint", "rmse",
    "backtest", "denoise_error_curve",
    # errors
    "ManifoldcastError", "InvalidArgumentError", "ParseError", "ConfigError",
    "NumericalError", "DegenerateNeighborhoodError", "SolverError", "NumericalDivergenceError",
]
