"""FastAPI application exposing the forecasting service."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import NumericalError
from . import handlers
from .schemas import (
    BacktestRequest,
    BacktestResponse,
    ForecastRequest,
    ForecastResponse,
    RateStudyRequest,
    RateStudyResponse,
)

app = FastAPI(
    title="manifoldcast",
    version=__version__,
    description="Manifold-denoised nearest-neighbour forecasting",
)


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/forecast", response_model=ForecastResponse)
def forecast(request: ForecastRequest) -> ForecastResponse:
    try:
        return handlers.run_forecast(request)
    except NumericalError as exc:
        raise HTTPException(status_code=500, detail={"kind": "numerical", "message": str(exc)})


@app.post("/backtest", response_model=BacktestResponse)
def backtest(request: BacktestRequest) -> BacktestResponse:
    try:
        return handlers.run_backtest(request)
    except NumericalError as exc:
        raise HTTPException(status_code=500, detail={"kind": "numerical", "message": str(exc)})


@app.post("/ratestudy", response_model=RateStudyResponse)
def ratestudy(request: RateStudyRequest) -> RateStudyResponse:
    try:
        return handlers.run_ratestudy(request)
    except NumericalError as exc:
        raise HTTPException(status_code=500, detail={"kind": "numerical", "message": str(exc)})
