"""Tabular ingestion, discretization and contingency tables.

A :class:`Dataset` holds densely integer-encoded categorical columns, one of
which is the target.  :func:`build_table` groups the rows by the values of an
attribute set and counts them against the target.
"""

from __future__ import annotations

import csv
import math
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "DataError",
    "Column",
    "Dataset",
    "ContingencyTable",
    "read_csv",
    "encode_dataset",
    "equal_frequency_bins",
    "build_table",
]

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


class DataError(ValueError):
    """Raised for malformed input tables."""


def _frozen(values, dtype=np.int64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Column:
    name: str
    codes: np.ndarray
    domain_size: int
    original_labels: tuple[str, ...]

    def __post_init__(self):
        codes = _frozen(self.codes)
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "original_labels", tuple(self.original_labels))
        if self.domain_size < 1:
            raise DataError(f"column {self.name!r}: empty domain")
        if codes.ndim != 1 or len(codes) == 0:
            raise DataError(f"column {self.name!r}: codes must be a non-empty vector")
        if codes.min() != 0 or codes.max() != self.domain_size - 1:
            raise DataError(f"column {self.name!r}: codes are not dense in [0, {self.domain_size})")
        if len(np.unique(codes)) != self.domain_size:
            raise DataError(f"column {self.name!r}: codes are not dense in [0, {self.domain_size})")
        if len(self.original_labels) != self.domain_size or len(set(self.original_labels)) != self.domain_size:
            raise DataError(f"column {self.name!r}: need {self.domain_size} distinct labels")

    def decode(self) -> list[str]:
        return [self.original_labels[c] for c in self.codes]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Integer-encoded categorical table with a designated target column."""

    columns: tuple[Column, ...]
    target_index: int
    name: str = "dataset"
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        if not self.columns:
            raise DataError("dataset has no columns")
        n = len(self.columns[0].codes)
        for col in self.columns:
            if len(col.codes) != n:
                raise DataError(f"column {col.name!r} has {len(col.codes)} values, expected {n}")
        if not 0 <= self.target_index < len(self.columns):
            raise DataError(f"target index {self.target_index} out of range")
        object.__setattr__(self, "n", n)

    @classmethod
    def from_codes(cls, columns: Mapping[str, Sequence[int]], target: str, name: str = "dataset") -> "Dataset":
        """Build a dataset from arbitrary integer codes, re-encoding each column densely."""
        cols = []
        for col_name, values in columns.items():
            uniq, dense = np.unique(np.asarray(values, dtype=np.int64), return_inverse=True)
            cols.append(Column(col_name, dense, len(uniq), tuple(str(u) for u in uniq)))
        names = list(columns)
        if target not in names:
            raise DataError(f"unknown target column {target!r}")
        return cls(tuple(cols), names.index(target), name)

    @property
    def target(self) -> Column:
        return self.columns[self.target_index]

    @property
    def input_indices(self) -> tuple[int, ...]:
        """Column indices of the input attributes, in column order."""
        return tuple(i for i in range(len(self.columns)) if i != self.target_index)

    @property
    def d(self) -> int:
        return len(self.columns) - 1

    def column_names(self, attrs: Sequence[int]) -> list[str]:
        return [self.columns[i].name for i in attrs]

    def check_attrs(self, attrs: Sequence[int]) -> tuple[int, ...]:
        """Validate an attribute set (sorted, unique, no target) and return it as a tuple."""
        attrs = tuple(int(a) for a in attrs)
        if any(b <= a for a, b in zip(attrs, attrs[1:])):
            raise DataError(f"attribute indices must be strictly increasing: {attrs}")
        for a in attrs:
            if not 0 <= a < len(self.columns):
                raise DataError(f"attribute index {a} out of range")
            if a == self.target_index:
                raise DataError("the target cannot be part of an attribute set")
        return attrs


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Joint counts of observed attribute-set values (rows) against target values (columns)."""

    cells: np.ndarray

    def __post_init__(self):
        cells = _frozen(self.cells)
        if cells.ndim != 2 or cells.size == 0:
            raise ValueError("cells must be a non-empty matrix")
        if (cells < 0).any():
            raise ValueError("negative cell count")
        object.__setattr__(self, "cells", cells)
        if (self.row_marginals == 0).any() or (self.col_marginals == 0).any():
            raise ValueError("every row and column must be observed at least once")

    @property
    def n(self) -> int:
        return int(self.cells.sum())

    @property
    def row_count(self) -> int:
        return self.cells.shape[0]

    @property
    def col_count(self) -> int:
        return self.cells.shape[1]

    @property
    def row_marginals(self) -> np.ndarray:
        return self.cells.sum(axis=1)

    @property
    def col_marginals(self) -> np.ndarray:
        return self.cells.sum(axis=0)

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(self.cells.T)


def read_csv(path: str | Path) -> list[list[str]]:
    """Read a comma separated file (double-quote quoting allowed) into rows of text cells."""
    with open(path, newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(fh) if row]


def equal_frequency_bins(values: Sequence[float], bins: int) -> list[int]:
    """Discretize numbers into at most ``bins`` groups of (roughly) equal size.

    Cut points sit at sorted ranks ``ceil(m * n / bins)``.  A cut that would
    split a run of equal values is moved forward to the end of that run, and
    empty bins are dropped, so the returned codes are dense.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    vals = np.asarray(values, dtype=float)
    n = len(vals)
    if n == 0:
        raise ValueError("values must be non-empty")
    ordered = np.sort(vals, kind="stable")
    thresholds = []
    for m in range(1, bins):
        pos = math.ceil(m * n / bins)
        while 0 < pos < n and ordered[pos - 1] == ordered[pos]:
            pos += 1
        if 0 < pos < n and (not thresholds or ordered[pos] > thresholds[-1]):
            thresholds.append(ordered[pos])
    codes = np.searchsorted(np.array(thresholds), vals, side="right")
    return [int(c) for c in codes]


def _format_number(x: float) -> str:
    return repr(int(x)) if float(x).is_integer() and abs(x) < 1e15 else repr(float(x))


def _encode_numeric(name: str, cells: list[str], bins: int) -> Column:
    values = [float(c) for c in cells]
    codes = equal_frequency_bins(values, bins)
    k = max(codes) + 1
    labels = []
    arr = np.array(values)
    code_arr = np.array(codes)
    for b in range(k):
        members = arr[code_arr == b]
        lo, hi = members.min(), members.max()
        labels.append(_format_number(lo) if lo == hi else f"[{_format_number(lo)}, {_format_number(hi)}]")
    return Column(name, codes, k, tuple(labels))


def _encode_categorical(name: str, cells: list[str]) -> Column:
    index: dict[str, int] = {}
    codes = [index.setdefault(c, len(index)) for c in cells]
    return Column(name, codes, len(index), tuple(index))


def encode_dataset(raw: Sequence[Sequence[str]], target_name: str, numeric_bins: int = 5,
                   name: str = "dataset") -> Dataset:
    """Encode a header + rows table of text cells into a :class:`Dataset`.

    A column whose cells all parse as decimal numbers is discretized with
    :func:`equal_frequency_bins`; every other column is categorical and is
    encoded in first-appearance order.
    """
    if numeric_bins < 1:
        raise DataError("numeric_bins must be >= 1")
    if not raw:
        raise DataError("input has no header row")
    header = [h.strip() for h in raw[0]]
    body = raw[1:]
    if len(header) < 2:
        raise DataError("need at least two columns")
    if len(set(header)) != len(header):
        raise DataError("duplicate column names in header")
    if not body:
        raise DataError("input has no data rows")
    if target_name not in header:
        raise DataError(f"unknown target column {target_name!r}")
    for r, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DataError(f"row {r}: expected {len(header)} cells, found {len(row)}")
        for c, cell in enumerate(row):
            if cell.strip() == "":
                raise DataError(f"missing value at row {r}, column {c + 1} ({header[c]!r})")

    columns = []
    for c, col_name in enumerate(header):
        cells = [row[c].strip() for row in body]
        if all(_DECIMAL.match(x) for x in cells):
            columns.append(_encode_numeric(col_name, cells, numeric_bins))
        else:
            columns.append(_encode_categorical(col_name, cells))
    return Dataset(tuple(columns), header.index(target_name), name)


def _group_rows(dataset: Dataset, attrs: Sequence[int]) -> tuple[np.ndarray, int]:
    # Incremental mixed-radix key, re-densified after each attribute so it never overflows.
    # np.unique sorts, which keeps the groups in lexicographic order of their code tuples.
    key = np.zeros(dataset.n, dtype=np.int64)
    groups = 1
    for a in attrs:
        col = dataset.columns[a]
        key = key * col.domain_size + col.codes
        _, key = np.unique(key, return_inverse=True)
        key = key.reshape(-1)
        groups = int(key.max()) + 1
    return key, groups


def build_table(dataset: Dataset, attrs: Sequence[int]) -> ContingencyTable:
    """Contingency table of the attribute set ``attrs`` against the target.

    Rows are the distinct observed value tuples of ``attrs`` in lexicographic
    order; the empty set yields a single row holding all ``n`` samples.
    """
    attrs = dataset.check_attrs(attrs)
    key, groups = _group_rows(dataset, attrs)
    target = dataset.target
    flat = np.bincount(key * target.domain_size + target.codes, minlength=groups * target.domain_size)
    return ContingencyTable(flat.reshape(groups, target.domain_size))
