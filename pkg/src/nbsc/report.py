"""CSV / JSON rendering of threshold results."""

from __future__ import annotations

import csv
import io
import json

__all__ = ["COLUMNS", "emit", "format_number", "write_report"]

COLUMNS = ("ensemble", "m", "q", "channel", "schedule", "W", "threshold", "capacity_gap", "bracket", "evals", "seed")


def format_number(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, str)):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return f"{float(x):.6g}"


def _row(res) -> dict:
    d = res.to_dict() if hasattr(res, "to_dict") else dict(res)
    return {k: d.get(k) for k in COLUMNS}


def emit(results, fmt: str = "csv") -> str:
    """Render results with a fixed column order and 6 significant digits."""
    results = list(results)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for res in results:
            row = _row(res)
            w.writerow([format_number(row[k]) for k in COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        out = []
        for res in results:
            row = {k: (v if v is None or isinstance(v, (str, int)) else float(format_number(v)))
                   for k, v in _row(res).items()}
            err = getattr(res, "error", "")
            if err:
                row["error"] = err
            out.append(row)
        return json.dumps(out, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_report(text: str, path: str | None) -> None:
    if path is None:
        print(text, end="")
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)
