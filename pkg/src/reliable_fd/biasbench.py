"""Simulation harness for the small-sample bias of fraction-of-information estimators.

Joint pmfs over two ternary variables are drawn uniformly from the simplex
and sorted into four dependence regimes by their true fraction of
information.  For each pmf, many datasets are sampled and the mean estimate
is compared with the true value.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .correction import AdjustmentUndefinedError, adjusted_fraction, reliable_fraction
from .data import ContingencyTable, Dataset, build_table
from .infotheory import DegenerateTargetError, fraction_of_information

__all__ = [
    "REGIMES",
    "ESTIMATORS",
    "JointPmf",
    "BiasReport",
    "DimensionalityPoint",
    "true_fraction",
    "sample_pmf_in_regime",
    "sample_dataset",
    "estimate_bias",
    "bias_summary",
    "dimensionality_curve",
]

REGIMES = (("weak", 0.0, 0.25), ("low", 0.25, 0.5), ("high", 0.5, 0.75), ("strong", 0.75, 1.0))

ESTIMATORS: dict[str, Callable[[ContingencyTable], float]] = {
    "f_hat": fraction_of_information,
    "f_adj": adjusted_fraction,
    "f0": lambda t: reliable_fraction(t).f0,
}

MAX_PMF_DRAWS = 10**6
_PMF_BATCH = 8192


def _xlogx(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, p * np.log2(p), 0.0)


def _fraction_from_probs(probs: np.ndarray) -> np.ndarray:
    """Vectorized true F over a stack of (..., 3, 3) pmfs; rows index X, columns index Y."""
    h_y = -_xlogx(probs.sum(axis=-2)).sum(axis=-1)
    h_xy = -_xlogx(probs).sum(axis=(-2, -1))
    h_x = -_xlogx(probs.sum(axis=-1)).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (h_y - (h_xy - h_x)) / h_y


def true_fraction(pmf: "JointPmf | np.ndarray") -> float:
    """Fraction of information of Y given X under the exact joint pmf."""
    probs = np.asarray(pmf.probs if isinstance(pmf, JointPmf) else pmf, dtype=np.float64)
    h_y = -_xlogx(probs.sum(axis=0)).sum()
    if h_y <= 0.0:
        raise DegenerateTargetError("the Y marginal of the pmf is degenerate")
    h_y_given_x = -_xlogx(probs).sum() + _xlogx(probs.sum(axis=1)).sum()
    return float(min(1.0, max(0.0, (h_y - h_y_given_x) / h_y)))


@dataclass(frozen=True, eq=False)
class JointPmf:
    probs: np.ndarray
    true_f: float

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64)
        if probs.shape != (3, 3) or (probs < 0).any() or abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("probs must be a non-negative 3x3 matrix summing to 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        if abs(true_fraction(probs) - self.true_f) > 1e-12:
            raise ValueError("true_f does not match probs")

    @classmethod
    def from_probs(cls, probs) -> "JointPmf":
        return cls(probs, true_fraction(np.asarray(probs, dtype=np.float64)))


def _in_regime(f: float, lo: float, hi: float) -> bool:
    # Regimes are (lo, hi]; the first one also admits exact independence.
    return (lo < f or (lo == 0.0 and f >= 0.0)) and f <= hi


def sample_pmf_in_regime(lo: float, hi: float, rng: np.random.Generator,
                         max_draws: int = MAX_PMF_DRAWS) -> JointPmf:
    """Rejection-sample a pmf uniform on the 8-simplex with true F in ``(lo, hi]``."""
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError(f"invalid regime ({lo}, {hi}]")
    drawn = 0
    while drawn < max_draws:
        size = min(_PMF_BATCH, max_draws - drawn)
        batch = rng.dirichlet(np.ones(9), size=size).reshape(size, 3, 3)
        drawn += size
        f = _fraction_from_probs(batch)
        for i in np.flatnonzero((f > lo - 1e-9) & (f <= hi + 1e-9)):
            candidate = batch[i] / batch[i].sum()
            value = true_fraction(candidate)
            if _in_regime(value, lo, hi):
                return JointPmf(candidate, value)
    raise RuntimeError(f"no pmf with F in ({lo}, {hi}] after {max_draws} draws")


def _draw_cells(pmf: JointPmf, n: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(pmf.probs.ravel())
    return np.minimum(np.searchsorted(cdf, rng.random(n), side="right"), 8)


def sample_dataset(pmf: JointPmf, n: int, rng: np.random.Generator) -> Dataset:
    """Draw ``n`` i.i.d. (X, Y) rows from the pmf by inverse CDF; Y is the target."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cells = _draw_cells(pmf, n, rng)
    return Dataset.from_codes({"X": cells // 3, "Y": cells % 3}, target="Y", name="pmf-sample")


def _sample_table(pmf: JointPmf, n: int, rng: np.random.Generator) -> ContingencyTable:
    # Same draws as sample_dataset followed by build_table(ds, [0]), without the Dataset overhead.
    counts = np.bincount(_draw_cells(pmf, n, rng), minlength=9).reshape(3, 3)
    counts = counts[counts.sum(axis=1) > 0][:, counts.sum(axis=0) > 0]
    return ContingencyTable(counts)


def _simulate(pmf: JointPmf, estimators: Sequence[Callable[[ContingencyTable], float]],
              n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Mean of each estimator over ``trials`` datasets.

    Datasets on which some estimator is undefined (constant Y, or a vanishing
    adjustment denominator) are redrawn.
    """
    totals = np.zeros(len(estimators))
    done = 0
    while done < trials:
        table = _sample_table(pmf, n, rng)
        if table.col_count < 2:
            continue
        try:
            values = [est(table) for est in estimators]
        except (DegenerateTargetError, AdjustmentUndefinedError):
            continue
        totals += values
        done += 1
    return totals / trials


def _resolve(estimator) -> Callable[[ContingencyTable], float]:
    return ESTIMATORS[estimator] if isinstance(estimator, str) else estimator


def estimate_bias(pmf: JointPmf, estimator, n: int, trials: int, rng: np.random.Generator) -> float:
    """Mean estimate over ``trials`` sampled datasets minus the true F of ``pmf``.

    ``estimator`` is a key of :data:`ESTIMATORS` or any callable taking a
    contingency table.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    return float(_simulate(pmf, [_resolve(estimator)], n, trials, rng)[0] - pmf.true_f)


@dataclass(frozen=True)
class BiasReport:
    estimator: str
    n: int
    mean_abs_bias: float
    std_abs_bias: float
    regime_means: tuple[tuple[str, float], ...]
    pmf_count: int
    trials_per_pmf: int
    seed: int


def bias_summary(pmfs_per_regime: int = 5, trials: int = 200, sizes: Sequence[int] = (5, 10, 20),
                 seed: int = 0, estimators: Sequence[str] = ("f_hat", "f_adj", "f0")) -> list[BiasReport]:
    """Mean and standard deviation of the absolute bias over pmfs sampled evenly from all regimes.

    All estimators are evaluated on the same simulated datasets.  Reports are
    ordered by estimator, then by data size.
    """
    if pmfs_per_regime < 1 or trials < 1 or not sizes:
        raise ValueError("pmfs_per_regime, trials and sizes must be positive/non-empty")
    if any(n < 1 for n in sizes):
        raise ValueError("data sizes must be >= 1")
    root = np.random.SeedSequence(seed)
    pmf_seq, sim_seq = root.spawn(2)

    pmfs: list[tuple[str, JointPmf]] = []
    for (regime, lo, hi), child in zip(REGIMES, pmf_seq.spawn(len(REGIMES))):
        rng = np.random.default_rng(child)
        pmfs.extend((regime, sample_pmf_in_regime(lo, hi, rng)) for _ in range(pmfs_per_regime))

    funcs = [_resolve(e) for e in estimators]
    # abs_bias[pmf, size, estimator]
    abs_bias = np.zeros((len(pmfs), len(sizes), len(funcs)))
    for i, ((_, pmf), pmf_child) in enumerate(zip(pmfs, sim_seq.spawn(len(pmfs)))):
        for j, (n, child) in enumerate(zip(sizes, pmf_child.spawn(len(sizes)))):
            means = _simulate(pmf, funcs, n, trials, np.random.default_rng(child))
            abs_bias[i, j] = np.abs(means - pmf.true_f)

    regimes = np.array([r for r, _ in pmfs])
    reports = []
    for e, name in enumerate(estimators):
        for j, n in enumerate(sizes):
            col = abs_bias[:, j, e]
            per_regime = tuple((r, float(col[regimes == r].mean())) for r, _, _ in REGIMES)
            reports.append(BiasReport(name, int(n), float(col.mean()), float(col.std()), per_regime,
                                      len(pmfs), trials, seed))
    return reports


@dataclass(frozen=True)
class DimensionalityPoint:
    dimensionality: int
    mean_f_hat: float
    mean_f0: float


def dimensionality_curve(n: int = 1000, attrs: int = 5, domain_size: int = 4, trials: int = 20,
                         seed: int = 0) -> list[DimensionalityPoint]:
    """Scores of ``{X1..Xm}`` for m = 1..attrs when all variables are independent and uniform."""
    if attrs < 1 or n < 1 or trials < 1:
        raise ValueError("n, attrs and trials must be >= 1")
    if domain_size < 2:
        raise DegenerateTargetError("a target with a single value has zero entropy")
    f_hat = np.zeros(attrs)
    f0 = np.zeros(attrs)
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        while True:
            codes = rng.integers(0, domain_size, size=(attrs + 1, n))
            if len(np.unique(codes[-1])) > 1:
                break
        names = [f"X{i + 1}" for i in range(attrs)] + ["Y"]
        ds = Dataset.from_codes(dict(zip(names, codes)), target="Y", name="independent")
        for m in range(1, attrs + 1):
            p = reliable_fraction(build_table(ds, range(m)))
            f_hat[m - 1] += p.f_hat
            f0[m - 1] += p.f0
    return [DimensionalityPoint(m + 1, float(f_hat[m] / trials), float(f0[m] / trials)) for m in range(attrs)]
