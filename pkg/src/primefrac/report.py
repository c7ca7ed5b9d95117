"""Deterministic CSV/JSON report writers."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .exact import format_rational


def cell(value: Any) -> str:
    """CSV text for one value; floats use ``repr`` so output is stable."""
    if isinstance(value, np.generic):
        value = value.item()
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return " ".join(cell(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def jsonable(value: Any) -> Any:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def render_csv(rows: Sequence[dict], columns: Sequence[str], config: dict) -> str:
    buf = io.StringIO()
    buf.write("# primefrac " + json.dumps(jsonable(config), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([cell(row.get(c)) for c in columns])
    return buf.getvalue()


def render_json(rows: Sequence[dict], columns: Sequence[str], config: dict) -> str:
    """Array of objects; the first object holds the run config."""
    records = [{"config": jsonable(config)}]
    records += [{c: jsonable(row.get(c)) for c in columns} for row in rows]
    return json.dumps(records, indent=2) + "\n"


def render(rows: Sequence[dict], columns: Sequence[str], config: dict, fmt: str) -> str:
    return render_csv(rows, columns, config) if fmt == "csv" else render_json(rows, columns, config)
