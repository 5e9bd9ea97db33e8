"""HTTP service wrapping the core package."""

from .schemas import (
    BacktestRequest,
    BacktestResponse,
    ForecastRequest,
    ForecastResponse,
    Provenance,
    RateStudyRequest,
    RateStudyResponse,
    ReportRowModel,
    RunConfig,
)

__all__ = [
    "RunConfig",
    "Provenance",
    "ForecastRequest",
    "ForecastResponse",
    "BacktestRequest",
    "BacktestResponse",
    "RateStudyRequest",
    "RateStudyResponse",
    "ReportRowModel",
]
