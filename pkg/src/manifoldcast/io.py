"""CSV and JSON input/output.

All numbers are written with 17 significant digits ("%.17g"), which
round-trips IEEE doubles exactly, so reruns with identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .types import TimeSeries


def read_series_csv(path: str | Path) -> tuple[TimeSeries, list[str] | None]:
    """Read a series: one row per time step, one column per component.

    A header is auto-detected by a non-numeric first row.  Returns the series
    and the header names (None when headerless).  Ragged rows and non-numeric
    cells are parse errors naming the offending line.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ParseError(f"input file not found: {path}")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not UTF-8: {exc}")
    rows = list(csv.reader(_io.StringIO(text)))
    rows = [(i + 1, r) for i, r in enumerate(rows) if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("input contains no data rows")

    header: list[str] | None = None
    first = rows[0][1]
    if not all(_is_number(c) for c in first):
        header = [c.strip() for c in first]
        rows = rows[1:]
        if not rows:
            raise ParseError("input contains a header but no data rows")

    width = len(rows[0][1])
    data = np.empty((len(rows), width))
    for i, (lineno, row) in enumerate(rows):
        if len(row) != width:
            raise ParseError(
                f"ragged row: expected {width} columns, found {len(row)}", line=lineno
            )
        for j, cell in enumerate(row):
            try:
                data[i, j] = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric value {cell.strip()!r}", line=lineno, column=j + 1)
    if not np.all(np.isfinite(data)):
        raise ParseError("input contains non-finite values")
    return TimeSeries(data), header


def fmt(x) -> str:
    """Format one number with 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def dumps_json(obj, indent: int = 2) -> str:
    """JSON text with floats rendered at 17 significant digits."""
    out: list[str] = []
    _emit(obj, out, indent, 0)
    return "".join(out) + "\n"


def _emit(obj, out: list[str], indent: int, level: int) -> None:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(key))}: ")
            _emit(val, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(close + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[\n")
        for i, val in enumerate(seq):
            out.append(pad)
            _emit(val, out, indent, level + 1)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(close + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def config_hash(config: dict) -> str:
    """Stable sha256 of a configuration mapping."""
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def write_forecast_csv(path: str | Path, forecasts: np.ndarray, provenance: dict,
                       header: list[str] | None = None) -> None:
    """Forecast rows preceded by a '#'-commented provenance block."""
    forecasts = np.atleast_2d(np.asarray(forecasts, dtype=float))
    lines = [f"# {key}: {value}" for key, value in provenance.items()]
    if header:
        lines.append(",".join(header))
    for row in forecasts:
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_report_csv(path: str | Path, rows) -> None:
    """Long-format report: one line per (lookfront, method, component)."""
    lines = ["lookfront,method,component,rmse"]
    for row in rows:
        for c, value in enumerate(row.rmse, start=1):
            lines.append(f"{row.lookfront},{row.method},{c},{fmt(value)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_curve_csv(path: str | Path, points) -> None:
    lines = ["T,mean_sq_dist,std"]
    for pt in points:
        lines.append(f"{pt.T},{fmt(pt.mean_sq_dist)},{fmt(pt.std)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False
