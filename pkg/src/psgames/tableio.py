"""CSV and JSON serialization of sweep tables.

Floats are written with ``repr`` (shortest round-trip form), so reading a
file back gives bit-identical values. Absent values are empty CSV fields or
JSON ``null``.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional

from .analysis import SweepRow, SweepTable
from .core import EssClassification

VALUE_COLUMNS = ["p_star", "pi_star", "total_production", "classification"]

# one (second-axis value or None, table) pair per sub-sweep
Tables = list


def columns(second_name: Optional[str]) -> list:
    return ["gamma"] + ([second_name] if second_name else []) + VALUE_COLUMNS


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def _parse(text: str):
    return None if text == "" else float(text)


def _row_dict(row: SweepRow, second_name, second_value) -> dict:
    out = {"gamma": row.gamma}
    if second_name:
        out[second_name] = second_value
    out.update(
        p_star=row.p_star,
        pi_star=row.pi_star,
        total_production=row.total_production,
        classification=row.classification.value,
    )
    return out


def dumps(tables: Tables, fmt: str, metadata: dict, second_name: Optional[str] = None) -> str:
    if fmt == "json":
        rows = [_row_dict(r, second_name, v) for v, t in tables for r in t.rows]
        return json.dumps({"rows": rows, "metadata": metadata}, indent=1, allow_nan=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    buf.write("# " + json.dumps(metadata, allow_nan=False) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns(second_name))
    for value, table in tables:
        for r in table.rows:
            d = _row_dict(r, second_name, value)
            writer.writerow([d["classification"] if k == "classification" else _fmt(d[k]) for k in d])
    return buf.getvalue()


def write_tables(path, tables: Tables, fmt: str, metadata: dict, second_name: Optional[str] = None) -> None:
    text = dumps(tables, fmt, metadata, second_name)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    Path(path).write_text(text)


def _group(records: list, second_name: Optional[str]) -> Tables:
    tables: Tables = []
    for rec in records:
        key = rec.get(second_name) if second_name else None
        if not tables or tables[-1][0] != key:
            tables.append((key, SweepTable([])))
        tables[-1][1].rows.append(
            SweepRow(
                rec["gamma"],
                rec["p_star"],
                rec["pi_star"],
                rec["total_production"],
                EssClassification(rec["classification"]),
            )
        )
    return tables


def loads(text: str, fmt: str) -> tuple:
    """Parse an emitted file back into ``(tables, metadata)``."""
    if fmt == "json":
        doc = json.loads(text)
        metadata = doc["metadata"]
        records = doc["rows"]
    elif fmt == "csv":
        lines = text.splitlines()
        metadata = {}
        if lines and lines[0].startswith("# "):
            metadata = json.loads(lines[0][2:])
            lines = lines[1:]
        reader = csv.DictReader(lines)
        records = []
        for raw in reader:
            rec = {k: (v if k == "classification" else _parse(v)) for k, v in raw.items()}
            records.append(rec)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    second_name = metadata.get("second_axis", {}).get("name") if metadata else None
    tables = _group(records, second_name)
    for _, table in tables:
        table.metadata = metadata
    return tables, metadata


def read_tables(path, fmt: Optional[str] = None) -> tuple:
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".")
    return loads(path.read_text(), fmt)
