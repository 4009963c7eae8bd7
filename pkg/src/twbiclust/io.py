"""File formats: matrix/assignment CSV and JSON outputs.

CSV dialect is pinned: comma separator, '.' decimal point, LF line endings,
UTF-8, shortest round-trip float formatting (Python repr).  Matrix files may
carry an optional header row of column labels; assignment files are plain
integer grids of the same shape as the matrix.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import numpy as np

from .model import BiclusterAssignment, GroupStats, ObservedMatrix


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False


def read_matrix_csv(path) -> ObservedMatrix:
    """Load a matrix CSV; a non-numeric first row is taken as column labels."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        first = fh.readline()
        if not first:
            raise ValueError(f"{path}: empty file")
        toks = [t.strip() for t in first.rstrip("\n").split(",")]
        col_labels = None
        skip = 0
        if not all(_is_number(t) for t in toks):
            col_labels = tuple(toks)
            skip = 1
    values = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2, dtype=np.float64)
    return ObservedMatrix(values, col_labels=col_labels)


def write_matrix_csv(path, a: ObservedMatrix) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        if a.col_labels is not None:
            fh.write(",".join(a.col_labels) + "\n")
        for row in a.values:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def read_assignment_csv(path) -> BiclusterAssignment:
    grid = np.loadtxt(Path(path), delimiter=",", ndmin=2, dtype=np.int64)
    return BiclusterAssignment(grid.astype(np.int32), int(grid.max()))


def write_assignment_csv(path, g: BiclusterAssignment) -> None:
    np.savetxt(Path(path), g.group_of, fmt="%d", delimiter=",", newline="\n")


def group_stats_dict(stats: GroupStats) -> dict:
    return {
        "mean": [float(x) for x in stats.mean],
        "std": [float(x) for x in stats.std],
        "count": [int(x) for x in stats.count],
    }


def write_json(path, obj: dict, schema: Optional[dict] = None) -> None:
    """Write a JSON document, validating against ``schema`` when given."""
    if schema is not None:
        import jsonschema

        jsonschema.validate(obj, schema)
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path) -> dict:
    with Path(path).open(encoding="utf-8") as fh:
        return json.load(fh)
