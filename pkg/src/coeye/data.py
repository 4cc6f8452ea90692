"""Loading, validation, and normalization of flat-file time-series datasets.

The on-disk format is one series per line: an integer class label first,
then the series values, tab- or comma-separated. Files are conventionally
named ``<Name>_TRAIN.<ext>`` / ``<Name>_TEST.<ext>``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyDataset, ParseError, RaggedData

DATA_EXTENSIONS = (".tsv", ".txt", ".csv")


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A fixed-length real-valued sequence with an optional class label."""

    values: np.ndarray
    label: int | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.shape[0]


class Dataset:
    """An immutable collection of equal-length labeled series.

    Internally a (n_series, n) float matrix plus an integer label vector;
    safe to share across concurrent workers.
    """

    def __init__(self, X, y, name: str = ""):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2:
            raise ValueError("X must be a 2-D (n_series, n) array")
        if y.shape != (X.shape[0],):
            raise ValueError("y length must match the number of series")
        X.flags.writeable = False
        y.flags.writeable = False
        self.X = X
        self.y = y
        self.name = name

    @property
    def n(self) -> int:
        """Series length."""
        return self.X.shape[1]

    @property
    def class_labels(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.unique(self.y))

    def class_counts(self) -> dict[int, int]:
        labels, counts = np.unique(self.y, return_counts=True)
        return {int(l): int(c) for l, c in zip(labels, counts)}

    @property
    def series(self) -> list[TimeSeries]:
        return [TimeSeries(self.X[i], int(self.y[i])) for i in range(len(self))]

    def __len__(self):
        return self.X.shape[0]

    def __getitem__(self, i: int) -> TimeSeries:
        return TimeSeries(self.X[i], int(self.y[i]))


def _sniff_delimiter(first_line: str) -> str:
    return "\t" if "\t" in first_line else ","


def load_ucr(path, delimiter: str = "auto") -> Dataset:
    """Parse a flat-file dataset.

    ``delimiter`` is ``auto`` (try tab, then comma), ``tab``, or ``comma``.
    Raises RaggedData / ParseError / EmptyDataset on malformed input; never
    silently drops rows.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw_lines = fh.read().splitlines()

    lines = [(no, line) for no, line in enumerate(raw_lines, start=1) if line.strip()]
    if not lines:
        raise EmptyDataset(f"{path}: no series found")

    if delimiter == "auto":
        sep = _sniff_delimiter(lines[0][1])
    elif delimiter == "tab":
        sep = "\t"
    elif delimiter == "comma":
        sep = ","
    else:
        raise ValueError(f"unknown delimiter {delimiter!r}")

    rows = []
    labels = []
    width = None
    for line_no, line in lines:
        fields = line.strip().split(sep)
        if width is None:
            width = len(fields)
            if width < 2:
                raise ParseError(path, line_no, 1, "row has no values after the label")
        elif len(fields) != width:
            raise RaggedData(path, line_no, width - 1, len(fields) - 1)

        label = _parse_label(path, line_no, fields[0])
        values = np.empty(width - 1, dtype=np.float64)
        for col, cell in enumerate(fields[1:], start=2):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(path, line_no, col, f"not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise ParseError(path, line_no, col, f"non-finite value: {cell!r}")
            values[col - 2] = v
        labels.append(label)
        rows.append(values)

    name = os.path.basename(str(path))
    for suffix in ("_TRAIN", "_TEST"):
        stem = name.rsplit(".", 1)[0]
        if stem.endswith(suffix):
            name = stem[: -len(suffix)]
            break
    return Dataset(np.vstack(rows), np.asarray(labels), name=name)


def _parse_label(path, line_no, cell):
    try:
        v = float(cell)
    except ValueError:
        raise ParseError(path, line_no, 1, f"label is not a number: {cell!r}") from None
    if not math.isfinite(v):
        raise ParseError(path, line_no, 1, f"label is not finite: {cell!r}")
    if v != int(v):
        raise ParseError(path, line_no, 1, f"label is not integer-coded: {cell!r}")
    return int(v)


def write_ucr(dataset: Dataset, path, delimiter: str = "tab") -> None:
    """Write a dataset in the flat-file format (17 significant digits)."""
    sep = "\t" if delimiter == "tab" else ","
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(len(dataset)):
            cells = [str(int(dataset.y[i]))]
            cells.extend(f"{v:.17g}" for v in dataset.X[i])
            fh.write(sep.join(cells) + "\n")


def znormalize(ts):
    """Scale to mean 0 and population standard deviation 1.

    Accepts a TimeSeries (returns a TimeSeries) or an array (returns an
    array). A constant input maps to all zeros.
    """
    if isinstance(ts, TimeSeries):
        return TimeSeries(znormalize(ts.values), ts.label)
    values = np.asarray(ts, dtype=np.float64)
    mean = values.mean()
    std = values.std()
    if std == 0.0:
        return np.zeros_like(values)
    return (values - mean) / std


def znormalize_rows(X: np.ndarray) -> np.ndarray:
    """Row-wise znormalize for a (n_series, n) matrix."""
    X = np.asarray(X, dtype=np.float64)
    mean = X.mean(axis=1, keepdims=True)
    std = X.std(axis=1, keepdims=True)
    out = np.where(std == 0.0, 0.0, (X - mean) / np.where(std == 0.0, 1.0, std))
    return out
