"""CSV/JSON writers. Every file carries the run configuration.

CSV numbers are written with 17 significant digits and JSON numbers with
Python's round-trip repr, so both parse back to the same doubles.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence


def fmt(value) -> str:
    if isinstance(value, (bool, int)) and not isinstance(value, float):
        return str(int(value))
    return f"{float(value):.17g}"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _plain(value):
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    value = float(value)
    if not math.isfinite(value):
        return repr(value)
    return value


def write_table(path: Path, config: dict, columns: Sequence[str], rows: Iterable[Sequence],
                fmt_name: str = "csv", comments: Sequence[str] = (), header_line: str | None = None) -> Path:
    """Write a table as CSV (``path.csv``) or JSON (``path.json``); returns the path written.

    ``header_line`` replaces the plain column-name line in CSV output for
    formats whose column header is itself a comment.
    """
    path = Path(path).with_suffix("." + fmt_name)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = [tuple(r) for r in rows]
    if fmt_name == "csv":
        lines = [f"# config: {canonical_json(config)}"]
        lines += [f"# {c}" for c in comments]
        lines.append(header_line if header_line is not None else ",".join(columns))
        lines += [",".join(fmt(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
    elif fmt_name == "json":
        doc = {
            "config": config,
            "comments": list(comments),
            "columns": list(columns),
            "rows": [[_plain(v) for v in row] for row in rows],
        }
        path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        raise ValueError(f"unknown output format {fmt_name!r}")
    return path


def write_json(path: Path, config: dict, payload: dict) -> Path:
    path = Path(path).with_suffix(".json")
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"config": config, **payload}
    path.write_text(json.dumps(doc, sort_keys=True, indent=1, default=_plain) + "\n")
    return path


def read_csv_table(path: Path) -> tuple[list[str], list[list[float]]]:
    """Comment lines dropped; returns (column names, numeric rows)."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    columns = lines[0].split(",")
    return columns, [[float(v) for v in ln.split(",")] for ln in lines[1:]]
