"""CSV reading and schema validation for the figure pipeline.

The pipeline consumes only the engine's public CSV files. Every file opens
with a `# schema_version=N experiment=...` comment line followed by a
one-line header; rows are plain comma-separated values with `nan` markers
for out-of-domain cells. Validation failures name the offending column so
a schema drift is visible immediately.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

SUPPORTED_SCHEMA_VERSION = 1


class SchemaError(ValueError):
    pass


@dataclass
class Table:
    experiment: str
    header: list[str]
    columns: dict[str, np.ndarray]  # numeric columns
    text_columns: dict[str, list[str]]

    def __len__(self) -> int:
        first = next(iter(self.columns.values()), None)
        if first is not None:
            return len(first)
        first_text = next(iter(self.text_columns.values()), None)
        return len(first_text) if first_text is not None else 0


def read_table(path: str | Path) -> Table:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise SchemaError(f"{path.name}: missing schema comment line")
    meta = dict(
        item.split("=", 1) for item in lines[0].lstrip("# ").split() if "=" in item
    )
    version = int(meta.get("schema_version", -1))
    if version != SUPPORTED_SCHEMA_VERSION:
        raise SchemaError(
            f"{path.name}: schema_version {version} unsupported "
            f"(pipeline speaks {SUPPORTED_SCHEMA_VERSION})"
        )
    header = lines[1].split(",")
    raw_rows = [line.split(",") for line in lines[2:] if line]
    for k, row in enumerate(raw_rows):
        if len(row) != len(header):
            raise SchemaError(f"{path.name}: row {k} has {len(row)} cells, header has {len(header)}")

    columns: dict[str, np.ndarray] = {}
    text_columns: dict[str, list[str]] = {}
    for j, name in enumerate(header):
        cells = [row[j] for row in raw_rows]
        try:
            columns[name] = np.array([float(c) for c in cells])
        except ValueError:
            text_columns[name] = cells
    return Table(meta.get("experiment", ""), header, columns, text_columns)


def require_columns(table: Table, names: list[str], path_name: str) -> None:
    for name in names:
        if name not in table.header:
            raise SchemaError(f"{path_name}: required column {name!r} is missing")
