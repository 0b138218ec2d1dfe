"""Delimited-file ingestion and result serialization.

Input: one variable per line, ``label,v1,...,vn``. Output: a header line and
one record per pair, reals with 6 significant digits, undefined values as
``nan``.
"""
from __future__ import annotations

import csv
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable

from .analysis import Dataset, ResultRecord

__all__ = ["DatasetError", "read_dataset", "write_results", "read_results", "HEADER"]

HEADER = ("var1", "var2", "MIC", "MAS", "MEV", "MCN", "pearson", "nonlinearity")


class DatasetError(ValueError):
    """Malformed input file; the message names the offending line."""


def read_dataset(path) -> Dataset:
    names, rows = [], []
    width = None
    with open(path, newline="") as fh:
        for line_no, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not f.strip() for f in row):
                continue
            label = row[0].strip()
            if not label:
                raise DatasetError(f"{path}: line {line_no}: empty label")
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise DatasetError(
                    f"{path}: line {line_no}: expected {width} fields, found {len(row)}"
                )
            values = []
            for field_no, text in enumerate(row[1:], start=2):
                try:
                    v = float(text)
                except ValueError:
                    raise DatasetError(
                        f"{path}: line {line_no}, field {field_no}: not a number: {text.strip()!r}"
                    ) from None
                if not math.isfinite(v):
                    raise DatasetError(
                        f"{path}: line {line_no}, field {field_no}: non-finite value {text.strip()!r}"
                    )
                values.append(v)
            names.append(label)
            rows.append(values)
    if not rows:
        raise DatasetError(f"{path}: no variables found")
    if width - 1 < 2:
        raise DatasetError(f"{path}: need at least 2 samples per variable, found {width - 1}")
    return Dataset.from_rows(names, rows)


def _fmt(v: float) -> str:
    return "%.6g" % v


def write_results(records: Iterable[ResultRecord], path) -> int:
    """Write ``records`` atomically (temporary file, then rename); return the count."""
    path = Path(path)
    count = 0
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(HEADER)
            for rec in records:
                s = rec.stats
                out.writerow(
                    (rec.name_x, rec.name_y)
                    + tuple(_fmt(v) for v in (s.mic, s.mas, s.mev, s.mcn, s.pearson_r, s.nonlinearity))
                )
                count += 1
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return count


def read_results(path) -> list[tuple[str, str, tuple[float, ...]]]:
    """Parse a file written by ``write_results``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != HEADER:
            raise DatasetError(f"{path}: unexpected header {header!r}")
        return [(r[0], r[1], tuple(float(v) for v in r[2:])) for r in reader]
