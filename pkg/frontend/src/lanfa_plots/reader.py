"""Read-only access to lanfa run directories (report.csv + meta.json)."""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass


FAILED = "FAILED"
EXACT = "EXACT"


class PlotsError(Exception):
    pass


@dataclass(frozen=True)
class RunData:
    path: str
    meta: dict
    columns: list
    rows: list  # list of dicts, values as-written strings

    @property
    def kind(self):
        return self.meta.get("kind", "convergence")

    @property
    def noise_floor(self):
        """The producer's check tolerance, 2^(-bits/2)."""
        bits = int(self.meta.get("precision_bits", 256))
        return 2.0 ** (-(bits // 2))

    def require_columns(self, names):
        for name in names:
            if name not in self.columns:
                raise PlotsError(
                    f"run {self.path!r} is missing required column {name!r}; "
                    f"has {self.columns}"
                )

    def value(self, row, column):
        """Float value, or the FAILED/EXACT sentinel string, or None for blank."""
        if column not in self.columns:
            raise PlotsError(f"run {self.path!r} has no column {column!r}")
        raw = row[column]
        if raw in (FAILED, EXACT):
            return raw
        if raw == "" or raw is None:
            return None
        try:
            return float(raw)
        except ValueError as exc:
            raise PlotsError(
                f"run {self.path!r}: cannot parse {column}={raw!r}"
            ) from exc


def load_run(path):
    report = os.path.join(path, "report.csv")
    meta_path = os.path.join(path, "meta.json")
    if not os.path.isfile(report):
        raise PlotsError(f"run {path!r} has no report.csv")
    if not os.path.isfile(meta_path):
        raise PlotsError(f"run {path!r} has no meta.json")
    with open(meta_path) as fh:
        meta = json.load(fh)
    with open(report, newline="") as fh:
        reader = csv.DictReader(fh)
        columns = reader.fieldnames or []
        rows = list(reader)
    if not rows:
        raise PlotsError(f"run {path!r} has an empty report.csv")
    expected = meta.get("columns")
    if expected and list(columns) != list(expected):
        raise PlotsError(
            f"run {path!r}: report.csv columns {columns} disagree with "
            f"meta.json columns {expected}"
        )
    return RunData(path=path, meta=meta, columns=list(columns), rows=rows)


def series(run, rows, column):
    """(ks, values, exact_ks) with FAILED/blank as NaN gaps.

    EXACT entries are returned as NaN in ``values`` and their k collected in
    ``exact_ks`` so callers can draw floor markers.
    """
    ks, values, exact_ks = [], [], []
    for row in rows:
        k = int(row["k"])
        v = run.value(row, column)
        ks.append(k)
        if v == EXACT:
            exact_ks.append(k)
            values.append(math.nan)
        elif v == FAILED or v is None:
            values.append(math.nan)
        else:
            values.append(v)
    return ks, values, exact_ks


def group_rows(rows, *keys):
    """Ordered {key-tuple: [rows]} grouping."""
    out = {}
    for row in rows:
        key = tuple(row[k] for k in keys)
        out.setdefault(key, []).append(row)
    return out
