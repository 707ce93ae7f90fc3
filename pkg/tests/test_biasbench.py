import mpmath
import numpy as np
import pytest

from reliable_fd.biasbench import (
    REGIMES,
    JointPmf,
    bias_summary,
    dimensionality_curve,
    estimate_bias,
    sample_dataset,
    sample_pmf_in_regime,
    true_fraction,
)
from reliable_fd.infotheory import DegenerateTargetError

INDEPENDENT = JointPmf.from_probs(np.full((3, 3), 1 / 9))


class TestTrueFraction:
    def test_product_pmf(self):
        probs = np.outer([0.2, 0.3, 0.5], [0.6, 0.3, 0.1])
        assert true_fraction(probs) == pytest.approx(0.0, abs=1e-12)

    def test_permutation_pmf(self):
        probs = np.array([[0, 0.5, 0], [0, 0, 0.2], [0.3, 0, 0]])
        assert true_fraction(probs) == pytest.approx(1.0, abs=1e-12)

    def test_block_pmf(self):
        probs = np.array([[1 / 3, 0, 0], [0, 1 / 6, 1 / 6], [0, 1 / 6, 1 / 6]])
        mpmath.mp.dps = 30
        # H(Y) = log2 3, H(Y|X) = 2/3
        expected = float(1 - mpmath.mpf(2) / 3 / mpmath.log(3, 2))
        assert true_fraction(probs) == pytest.approx(expected, abs=1e-12)

    def test_degenerate(self):
        probs = np.zeros((3, 3))
        probs[:, 1] = [0.2, 0.3, 0.5]
        with pytest.raises(DegenerateTargetError):
            true_fraction(probs)

    def test_pmf_validation(self):
        with pytest.raises(ValueError):
            JointPmf.from_probs(np.full((3, 3), 0.1))
        with pytest.raises(ValueError):
            JointPmf(np.full((3, 3), 1 / 9), 0.5)


@pytest.mark.parametrize("name, lo, hi", REGIMES)
def test_regime_sampling(name, lo, hi):
    rng = np.random.default_rng(17)
    for _ in range(3):
        pmf = sample_pmf_in_regime(lo, hi, rng)
        assert lo < pmf.true_f <= hi or (lo == 0.0 and pmf.true_f == 0.0)
        assert abs(pmf.probs.sum() - 1.0) <= 1e-12
    a = sample_pmf_in_regime(lo, hi, np.random.default_rng(3))
    b = sample_pmf_in_regime(lo, hi, np.random.default_rng(3))
    assert np.array_equal(a.probs, b.probs)


def test_regime_sampling_gives_up():
    with pytest.raises(RuntimeError):
        sample_pmf_in_regime(0.999, 1.0, np.random.default_rng(0), max_draws=100)
    with pytest.raises(ValueError):
        sample_pmf_in_regime(0.5, 0.5, np.random.default_rng(0))


class TestSampleDataset:
    def test_support_respected(self):
        probs = np.zeros((3, 3))
        probs[1, 0] = probs[1, 2] = 0.5
        ds = sample_dataset(JointPmf.from_probs(probs), 200, np.random.default_rng(0))
        assert ds.n == 200
        assert set(np.asarray(ds.columns[0].decode(), dtype=int)) == {1}
        assert set(np.asarray(ds.columns[1].decode(), dtype=int)) == {0, 2}

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            sample_dataset(INDEPENDENT, 0, np.random.default_rng(0))

    def test_cell_frequencies(self):
        probs = np.array([[0.05, 0.1, 0.05], [0.2, 0.1, 0.1], [0.15, 0.05, 0.2]])
        n = 100_000
        ds = sample_dataset(JointPmf.from_probs(probs), n, np.random.default_rng(9))
        x = np.asarray(ds.columns[0].decode(), dtype=int)
        y = np.asarray(ds.columns[1].decode(), dtype=int)
        freq = np.bincount(x * 3 + y, minlength=9).reshape(3, 3) / n
        se = np.sqrt(probs * (1 - probs) / n)
        assert (np.abs(freq - probs) <= 3 * se + 1e-12).all()


def test_stub_estimator_has_zero_bias():
    pmf = sample_pmf_in_regime(0.25, 0.5, np.random.default_rng(1))
    bias = estimate_bias(pmf, lambda t: pmf.true_f, 10, 50, np.random.default_rng(2))
    assert bias == pytest.approx(0.0, abs=1e-12)


def test_independence_bias():
    rng = np.random.default_rng(4)
    assert estimate_bias(INDEPENDENT, "f_hat", 5, 500, rng) > 0.0
    assert abs(estimate_bias(INDEPENDENT, "f0", 1000, 200, rng)) < 0.02
    for n in (5, 10, 20):
        assert estimate_bias(INDEPENDENT, "f_hat", n, 500, rng) >= estimate_bias(INDEPENDENT, "f0", n, 500, rng)


def test_estimate_bias_rejections():
    with pytest.raises(ValueError):
        estimate_bias(INDEPENDENT, "f_hat", 5, 0, np.random.default_rng(0))
    with pytest.raises(KeyError):
        estimate_bias(INDEPENDENT, "nope", 5, 1, np.random.default_rng(0))


def test_summary_shape_and_reproducibility():
    reports = bias_summary(pmfs_per_regime=1, trials=10, sizes=(5, 10), seed=3)
    assert [(r.estimator, r.n) for r in reports] == [
        (e, n) for e in ("f_hat", "f_adj", "f0") for n in (5, 10)
    ]
    assert all(r.pmf_count == 4 and r.trials_per_pmf == 10 for r in reports)
    assert [name for name, _ in reports[0].regime_means] == [r[0] for r in REGIMES]
    again = bias_summary(pmfs_per_regime=1, trials=10, sizes=(5, 10), seed=3)
    assert reports == again
    other = bias_summary(pmfs_per_regime=1, trials=10, sizes=(5, 10), seed=4)
    assert reports != other


def test_summary_single_pmf_per_regime_std():
    reports = bias_summary(pmfs_per_regime=1, trials=1, sizes=(5,), seed=0, estimators=("f_hat",))
    (report,) = reports
    means = [m for _, m in report.regime_means]
    assert report.mean_abs_bias == pytest.approx(np.mean(means), abs=1e-12)
    assert report.std_abs_bias == pytest.approx(np.std(means), abs=1e-12)


def test_dimensionality_curve():
    points = dimensionality_curve(n=300, attrs=3, domain_size=3, trials=5, seed=1)
    assert [p.dimensionality for p in points] == [1, 2, 3]
    f_hat = [p.mean_f_hat for p in points]
    assert f_hat == sorted(f_hat)
    assert all(abs(p.mean_f0) < 0.05 for p in points)
    assert points == dimensionality_curve(n=300, attrs=3, domain_size=3, trials=5, seed=1)
    with pytest.raises(DegenerateTargetError):
        dimensionality_curve(domain_size=1)
