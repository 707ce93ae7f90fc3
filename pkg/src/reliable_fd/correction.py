"""Chance correction of the fraction of information under the permutation model.

The expected mutual information of a table under random permutation of the
target column depends only on the marginals.  It is a sum over table cells
of a hypergeometric expectation, evaluated here with the ratio recurrence of
the hypergeometric pmf, so one cell costs O(min(a, b)) at worst.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .data import ContingencyTable
from .infotheory import DegenerateTargetError, entropy, fraction_of_information, mutual_information

__all__ = [
    "AdjustmentUndefinedError",
    "CorrectionValue",
    "ScoredPattern",
    "hypergeometric_cell_sum",
    "expected_mi_permutation",
    "expected_mi_bruteforce",
    "reliable_fraction",
    "adjusted_fraction",
]

M0_CLAMP = 1e-12
BRUTEFORCE_MAX_N = 8


class AdjustmentUndefinedError(ValueError):
    """The adjusted fraction has a (numerically) zero denominator."""


@dataclass(frozen=True)
class CorrectionValue:
    m0: float
    b0: float


@dataclass(frozen=True)
class ScoredPattern:
    """An attribute set with its plug-in score, bias estimate and corrected score."""

    attrs: tuple[int, ...]
    f_hat: float
    b0: float
    f0: float
    f_adj: float | None = None

    @property
    def size(self) -> int:
        return len(self.attrs)


def _log_factorial(k: int) -> float:
    return math.lgamma(k + 1)


def hypergeometric_cell_sum(a: int, b: int, n: int) -> float:
    """Expected value of ``(k/n) log2(k n / (a b))`` for ``k ~ Hypergeometric(a, b, n)``.

    ``a`` draws from a population of ``n`` containing ``b`` successes.  The
    pmf is evaluated in log space once, at the mode, and the remaining support
    is reached with the ratio recurrence in both directions.  Terms that have
    underflowed to zero end the walk, since the pmf is unimodal.
    """
    if not (0 < a <= n and 0 < b <= n):
        raise ValueError(f"need 0 < a, b <= n, got a={a}, b={b}, n={n}")
    lo = max(0, a + b - n)
    hi = min(a, b)
    if hi < 1:
        return 0.0
    lf = _log_factorial
    rest = n - a - b
    mode = min(max((a + 1) * (b + 1) // (n + 2), lo), hi)
    log_h = (lf(a) + lf(n - a) + lf(b) + lf(n - b) - lf(n)
             - lf(mode) - lf(a - mode) - lf(b - mode) - lf(rest + mode))
    h_mode = math.exp(log_h)
    log_ab = math.log2(a * b / n)

    total = 0.0
    h, k = h_mode, mode
    while k <= hi and h > 0.0:
        if k > 0:
            total += h * k * (math.log2(k) - log_ab)
        h *= (a - k) * (b - k) / ((k + 1) * (rest + k + 1))
        k += 1
    h, k = h_mode, mode
    while k > max(lo, 1) and h > 0.0:
        h *= k * (rest + k) / ((a - k + 1) * (b - k + 1))
        k -= 1
        total += h * k * (math.log2(k) - log_ab)
    return total / n


def _expected_mi(a_values, b_values, n: int) -> float:
    b_counts = sorted(Counter(int(b) for b in b_values).items())
    total = 0.0
    # Rows (and columns) with equal marginals contribute identical cell sums.
    for a, mult_a in sorted(Counter(int(a) for a in a_values).items()):
        row = 0.0
        for b, mult_b in b_counts:
            row += mult_b * hypergeometric_cell_sum(a, b, n)
        total += mult_a * row
    return 0.0 if total < M0_CLAMP else total


def expected_mi_permutation(t: ContingencyTable) -> CorrectionValue:
    """Expected mutual information (bits) under random permutation of the target, and its ratio to H(Y)."""
    hy = entropy(t.col_marginals, t.n)
    if hy <= 0.0:
        raise DegenerateTargetError("target column is constant; the bias ratio is undefined")
    m0 = _expected_mi(t.row_marginals, t.col_marginals, t.n)
    return CorrectionValue(m0=m0, b0=min(1.0, m0 / hy))


def _expand(t: ContingencyTable) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = np.nonzero(t.cells)
    reps = t.cells[rows, cols]
    return np.repeat(rows, reps), np.repeat(cols, reps)


def expected_mi_bruteforce(t: ContingencyTable) -> float:
    """Average mutual information over all ``n!`` permutations of the target column.

    Exponential cost; only for tables with ``n <= 8``.
    """
    n = t.n
    if n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {BRUTEFORCE_MAX_N}, got {n}")
    x, y = _expand(t)
    r, c = t.cells.shape
    a = t.row_marginals.astype(float)
    b = t.col_marginals.astype(float)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    joint = x[None, :] * c + y[perms]
    counts = np.zeros((len(perms), r * c))
    np.add.at(counts, (np.arange(len(perms))[:, None], joint), 1.0)
    expected = (a[:, None] * b[None, :]).ravel() / n
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(counts > 0, counts / n * np.log2(counts / expected), 0.0)
    mi = terms.sum(axis=1)
    return float(np.clip(mi, 0.0, None).mean())


def reliable_fraction(t: ContingencyTable, attrs: tuple[int, ...] = ()) -> ScoredPattern:
    """Plug-in fraction of information minus its expected value under the permutation model.

    The corrected score ``f0`` is not clamped; negative values indicate independence.
    """
    f_hat = fraction_of_information(t)
    b0 = expected_mi_permutation(t).b0
    return ScoredPattern(tuple(attrs), f_hat, b0, f_hat - b0)


def adjusted_fraction(t: ContingencyTable) -> float:
    """``(I - E0[I]) / (H(Y) - E0[I])``, the adjusted-for-chance variant."""
    hy = entropy(t.col_marginals, t.n)
    if hy <= 0.0:
        raise DegenerateTargetError("target column is constant; the adjusted fraction is undefined")
    m0 = expected_mi_permutation(t).m0
    denom = hy - m0
    if denom <= 1e-12:
        raise AdjustmentUndefinedError("H(Y) equals the expected mutual information; adjustment undefined")
    return (mutual_information(t) - m0) / denom
