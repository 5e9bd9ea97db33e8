"""Pydantic models for the service wire format and run configuration.

`RunConfig` mirrors the TOML configuration file one-to-one; the response
models define the published JSON report schemas (see `model_json_schema`).
Defaults follow the reference hyperparameters: window length 11, discount
20, 21 adaptive-averaging passes with threshold 1.0, and the graph denoiser
at mu=1500 with 7 iterations and penalty h^2/7.
"""

from __future__ import annotations

from typing import Callable, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..forecast import ForecastConfig
from ..ldmm import LdmmConfig
from ..same import SameConfig

SCHEMA_VERSION = "1"


class WindowSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    length: int = Field(default=11, ge=1, description="sliding-window length b")
    scale: bool = Field(default=False, description="z-score components before embedding")


class SameSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(default=1, ge=1)
    iterations: int = Field(default=21, ge=1)
    h0: Optional[float] = Field(default=None, gt=0)
    tau0: float = Field(default=1.0, gt=0)
    decay: float = Field(default=1.25, gt=1, description="bandwidth decay factor a")
    neighborhood: float = Field(default=1.5, gt=0, description="refit radius factor gamma")
    kernel: Literal["quarter", "quarter-squared"] = "quarter"

    def to_config(self) -> SameConfig:
        return SameConfig(
            d=self.dim,
            iterations=self.iterations,
            h0=self.h0,
            tau0=self.tau0,
            a=self.decay,
            gamma=self.neighborhood,
            kernel=self.kernel,
        )


class LdmmSection(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    h_sq: Optional[float] = Field(default=None, gt=0)
    lam: Optional[float] = Field(default=None, ge=0, alias="lambda")
    mu: float = Field(default=1500.0, gt=0)
    max_iters: int = Field(default=7, ge=1)
    rel_tol: float = Field(default=1e-6, ge=0)
    ridge: float = Field(default=1e-10, ge=0)

    def to_config(self) -> LdmmConfig:
        return LdmmConfig(
            h_sq=self.h_sq,
            lam=self.lam,
            mu=self.mu,
            max_iters=self.max_iters,
            rel_tol=self.rel_tol,
            ridge=self.ridge,
        )


class DenoiserSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    method: Literal["same", "ldmm", "none"] = "none"
    same: SameSection = SameSection()
    ldmm: LdmmSection = LdmmSection()

    def to_config(self):
        if self.method == "same":
            return self.same.to_config()
        if self.method == "ldmm":
            return self.ldmm.to_config()
        return None


class ForecastSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    neighbors: Union[int, list[int]] = Field(default=10)
    discount: float = Field(default=20.0, gt=0, description="recency discount tau")
    freeze_denoise: bool = False

    @model_validator(mode="after")
    def _check_neighbors(self):
        ks = self.neighbors if isinstance(self.neighbors, list) else [self.neighbors]
        if not ks or any(k < 1 for k in ks):
            raise ValueError("every neighbour count must be >= 1")
        return self

    def to_config(self, method: str) -> ForecastConfig:
        k = tuple(self.neighbors) if isinstance(self.neighbors, list) else self.neighbors
        return ForecastConfig(k=k, tau=self.discount, denoiser=method)


class BacktestSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lookfronts: list[int] = Field(default=[1, 2, 3, 4])
    holdout: int = Field(default=20, ge=1)
    methods: list[Literal["same", "ldmm", "none"]] = Field(default=["same", "ldmm", "none"])

    @model_validator(mode="after")
    def _check(self):
        if not self.lookfronts or any(m < 1 for m in self.lookfronts):
            raise ValueError("lookfronts must be positive integers")
        if not self.methods:
            raise ValueError("need at least one method")
        if self.holdout < max(self.lookfronts):
            raise ValueError("holdout must cover the largest lookfront")
        return self


class SyntheticSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["circle", "ar"] = "circle"
    length: int = Field(default=400, ge=2)
    sigma: float = Field(default=0.05, ge=0)
    distribution: Literal["gaussian", "bounded-uniform"] = "gaussian"
    # circle parameters
    step_kappa: float = Field(default=25.0, gt=0)
    mixing: Literal["ergodic", "periodic"] = "ergodic"
    jitter: float = Field(default=1e-3, ge=0)
    # autoregression parameters
    coeffs: list[float] = Field(default=[0.6, 0.3])
    init: Optional[list[float]] = None
    ar_window: Optional[int] = Field(default=None, ge=2)

    def generator_params(self) -> dict:
        if self.kind == "circle":
            return {
                "step_kappa": self.step_kappa,
                "mixing": self.mixing,
                "jitter": self.jitter,
                "distribution": self.distribution,
            }
        return {
            "coeffs": list(self.coeffs),
            "init": self.init,
            "window": self.ar_window,
            "distribution": self.distribution,
        }


class RateStudySection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t_grid: list[int] = Field(default=[100, 400, 1600])
    trials: int = Field(default=10, ge=1)

    @model_validator(mode="after")
    def _check(self):
        if any(t2 <= t1 for t1, t2 in zip(self.t_grid, self.t_grid[1:])):
            raise ValueError("t_grid must be strictly increasing")
        return self


class RunConfig(BaseModel):
    """Full run configuration; mirrors the TOML file."""

    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    window: WindowSection = WindowSection()
    forecast: ForecastSection = ForecastSection()
    denoiser: DenoiserSection = DenoiserSection()
    backtest: BacktestSection = BacktestSection()
    synthetic: SyntheticSection = SyntheticSection()
    ratestudy: RateStudySection = RateStudySection()


class Provenance(BaseModel):
    config_sha256: str
    seed: int
    version: str


class ForecastRequest(BaseModel):
    series: list[list[float]] = Field(min_length=2)
    lookfront: int = Field(default=1, ge=1)
    config: RunConfig = RunConfig()


class ForecastResponse(BaseModel):
    schema_version: str = SCHEMA_VERSION
    forecasts: list[list[float]]
    provenance: Provenance


class ReportRowModel(BaseModel):
    lookfront: int
    method: str
    rmse: list[float]


class BacktestRequest(BaseModel):
    series: Optional[list[list[float]]] = None
    config: RunConfig = RunConfig()


class BacktestResponse(BaseModel):
    """The published backtest report schema."""

    schema_version: str = SCHEMA_VERSION
    config: dict
    rows: list[ReportRowModel]
    provenance: Provenance


class RateStudyRequest(BaseModel):
    config: RunConfig = RunConfig()


class RatePointModel(BaseModel):
    T: int
    mean_sq_dist: float
    std: float


class RateStudyResponse(BaseModel):
    schema_version: str = SCHEMA_VERSION
    rows: list[RatePointModel]
    provenance: Provenance
