"""Plug-in Shannon quantities over contingency tables, in bits."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .data import ContingencyTable

__all__ = [
    "DegenerateTargetError",
    "entropy",
    "conditional_entropy",
    "mutual_information",
    "fraction_of_information",
]

MI_CLAMP = 1e-12


class DegenerateTargetError(ValueError):
    """The target has zero entropy, so fractions of information are undefined."""


def entropy(counts: Sequence[int], n: int | None = None) -> float:
    """Empirical entropy ``-sum (c/n) log2(c/n)`` of a count vector; zero counts are skipped."""
    c = np.asarray(counts, dtype=np.float64)
    total = c.sum()
    if n is None:
        n = total
    if total != n:
        raise ValueError(f"counts sum to {total:g}, expected {n}")
    if n <= 0:
        raise ValueError("n must be positive")
    p = c[c > 0] / n
    return float(-(p * np.log2(p)).sum()) + 0.0


def conditional_entropy(t: ContingencyTable) -> float:
    cells = t.cells.astype(np.float64)
    a = cells.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(cells > 0, cells * np.log2(cells / a), 0.0)
    return float(-terms.sum() / t.n) + 0.0


def mutual_information(t: ContingencyTable) -> float:
    """``H(Y) - H(Y|X)``; round-off below 1e-12 in magnitude is clamped to 0."""
    mi = entropy(t.col_marginals, t.n) - conditional_entropy(t)
    return 0.0 if mi < MI_CLAMP else mi


def fraction_of_information(t: ContingencyTable) -> float:
    """Proportional reduction of target uncertainty, in [0, 1].

    Raises :class:`DegenerateTargetError` when the target is constant.
    """
    hy = entropy(t.col_marginals, t.n)
    if hy <= 0.0:
        raise DegenerateTargetError("target column is constant; fraction of information is undefined")
    return min(1.0, mutual_information(t) / hy)
