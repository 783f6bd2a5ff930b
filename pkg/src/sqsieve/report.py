"""CSV / JSON report writers shared by every CLI subcommand.

CSV: header row, comma separated, reals with 17 significant digits.
JSON: {"meta": {...}, "rows": [...]}; non-finite reals become null.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Iterable, Mapping, TextIO

SCHEMA_VERSION = 1


def _columns(rows: list[Mapping[str, Any]]) -> list[str]:
    cols: list[str] = []
    for row in rows:
        for k in row:
            if k not in cols:
                cols.append(k)
    return cols


def fmt_csv(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, Fraction)):
        return format(float(v), ".17g")
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, Fraction):
        v = float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, complex):
        return [_json_value(v.real), _json_value(v.imag)]
    if isinstance(v, Mapping):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if hasattr(v, "item"):  # numpy scalar
        return _json_value(v.item())
    return v


def write_csv(rows: Iterable[Mapping[str, Any]], out: TextIO) -> None:
    rows = list(rows)
    cols = _columns(rows)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([fmt_csv(row.get(c)) for c in cols])


def write_json(rows: Iterable[Mapping[str, Any]], meta: Mapping[str, Any], out: TextIO) -> None:
    doc = {"meta": _json_value(dict(meta)), "rows": [_json_value(dict(r)) for r in rows]}
    json.dump(doc, out, indent=1, sort_keys=False)
    out.write("\n")


def render(rows: Iterable[Mapping[str, Any]], meta: Mapping[str, Any], fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        write_csv(rows, buf)
    elif fmt == "json":
        write_json(rows, meta, buf)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))
