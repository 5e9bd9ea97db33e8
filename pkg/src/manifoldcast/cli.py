"""Command-line interface.

The CLI is a thin client of the service layer: it parses local files into
the same request models the HTTP API accepts, executes them in-process by
default or against a running server via --server, and writes the results to
local files.

Exit codes partition failures: 2 = input parsing, 3 = configuration,
4 = numerical.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import httpx
import tomli
from pydantic import ValidationError

from . import __version__
from .errors import ConfigError, NumericalError, ParseError
from .io import dumps_json, read_series_csv, write_curve_csv, write_forecast_csv, write_report_csv
from .service import handlers
from .service.schemas import (
    BacktestRequest,
    BacktestResponse,
    ForecastRequest,
    ForecastResponse,
    RateStudyRequest,
    RateStudyResponse,
    RunConfig,
)

EXIT_PARSE = 2
EXIT_CONFIG = 3
EXIT_NUMERIC = 4

#: overridable transport factory, used by tests to route --server in-process
_client_factory = lambda base_url: httpx.Client(base_url=base_url, timeout=600.0)


def load_config(path: str | None) -> RunConfig:
    """Parse and validate a TOML run configuration."""
    if path is None:
        return RunConfig()
    try:
        raw = tomli.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}")
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        raise ConfigError(first["msg"], field=field)


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    try:
        fn()
    except ParseError as exc:
        _fail(EXIT_PARSE, str(exc))
    except (ConfigError, ValidationError) as exc:
        _fail(EXIT_CONFIG, str(exc))
    except NumericalError as exc:
        _fail(EXIT_NUMERIC, str(exc))


def _post(server: str, path: str, payload: dict, response_model):
    with _client_factory(server) as client:
        resp = client.post(path, json=payload)
    if resp.status_code == 422:
        raise ConfigError(resp.text)
    if resp.status_code >= 500:
        detail = resp.json().get("detail", {})
        if isinstance(detail, dict) and detail.get("kind") == "numerical":
            raise NumericalError(detail.get("message", resp.text))
        raise NumericalError(resp.text)
    return response_model.model_validate(resp.json())


def _provenance_block(resp) -> dict:
    return {
        "schema_version": resp.schema_version,
        "config_sha256": resp.provenance.config_sha256,
        "seed": resp.provenance.seed,
        "version": resp.provenance.version,
    }


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Manifold-denoised nearest-neighbour forecasting."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(), help="series CSV")
@click.option("--config", "config_path", type=click.Path(), help="TOML run configuration")
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--lookfront", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=None, help="override the config seed")
@click.option("--freeze-denoise", is_flag=True, default=False,
              help="denoise once and reuse across recursive steps")
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--server", default=None, help="run against a service URL instead of in-process")
def forecast(input_path, config_path, output_path, lookfront, seed, freeze_denoise, jobs, server):
    """Forecast the next LOOKFRONT values of a series."""

    def run():
        series, header = read_series_csv(input_path)
        cfg = load_config(config_path)
        if seed is not None:
            cfg = cfg.model_copy(update={"seed": seed})
        if freeze_denoise:
            cfg.forecast.freeze_denoise = True
        request = ForecastRequest(
            series=series.values.tolist(), lookfront=lookfront, config=cfg
        )
        if server:
            resp = _post(server, "/forecast", request.model_dump(mode="json"), ForecastResponse)
        else:
            resp = handlers.run_forecast(request)
        import numpy as np

        write_forecast_csv(
            output_path, np.asarray(resp.forecasts), _provenance_block(resp), header
        )
        click.echo(f"wrote {lookfront} forecast row(s) to {output_path}")

    _guarded(run)


@main.command()
@click.option("--input", "input_path", type=click.Path(), default=None,
              help="series CSV; omitted = synthetic series from config")
@click.option("--config", "config_path", type=click.Path(), help="TOML run configuration")
@click.option("--output", "output_path", required=True, type=click.Path(),
              help="report CSV path; a JSON report is written next to it")
@click.option("--seed", type=int, default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--server", default=None)
def backtest(input_path, config_path, output_path, seed, jobs, server):
    """Rolling-origin backtest producing a lookfront x method RMSE table."""

    def run():
        cfg = load_config(config_path)
        if seed is not None:
            cfg = cfg.model_copy(update={"seed": seed})
        series = None
        if input_path is not None:
            series = read_series_csv(input_path)[0].values.tolist()
        request = BacktestRequest(series=series, config=cfg)
        if server:
            resp = _post(server, "/backtest", request.model_dump(mode="json"), BacktestResponse)
        else:
            resp = handlers.run_backtest(request, jobs=jobs)
        out = Path(output_path)
        write_report_csv(out, resp.rows)
        json_path = out.with_suffix(".json")
        json_path.write_text(dumps_json(resp.model_dump(mode="json")), encoding="utf-8")
        click.echo(f"wrote {len(resp.rows)} report rows to {out} and {json_path}")

    _guarded(run)


@main.command()
@click.option("--config", "config_path", type=click.Path(), help="TOML run configuration")
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--server", default=None)
def ratestudy(config_path, output_path, seed, jobs, server):
    """Denoising error versus sample size on synthetic data."""

    def run():
        cfg = load_config(config_path)
        if seed is not None:
            cfg = cfg.model_copy(update={"seed": seed})
        request = RateStudyRequest(config=cfg)
        if server:
            resp = _post(server, "/ratestudy", request.model_dump(mode="json"), RateStudyResponse)
        else:
            resp = handlers.run_ratestudy(request, jobs=jobs)
        write_curve_csv(output_path, resp.rows)
        click.echo(f"wrote {len(resp.rows)} grid rows to {output_path}")

    _guarded(run)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
