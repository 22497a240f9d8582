import numpy as np
import pytest

from irslink.channel import sample_channels
from irslink.estimation import estimation_error_variance, sample_estimates
from irslink.scenario import synthetic_statistics
from irslink.streams import keyed_rng


def _realization(seed=0):
    stats = synthetic_statistics(keyed_rng(40, 0), N=1, L=4, M=3,
                                 alpha=[1.0], beta=[1.0], K1=[1.0], K2=[1.0],
                                 corr_r=0.0)
    return sample_channels(stats, keyed_rng(seed, 1))


def test_error_variance_training_formula():
    assert estimation_error_variance(10, 100.0) == pytest.approx(1.0 / 1001.0, rel=1e-15)
    assert estimation_error_variance(0, 100.0) == 1.0
    assert estimation_error_variance(10, 0.0) == 1.0


def test_error_variance_perfect_flag():
    assert estimation_error_variance(10, 100.0, perfect_csi=True) == 0.0


def test_error_variance_rejects_negative():
    with pytest.raises(ValueError):
        estimation_error_variance(-1, 100.0)
    with pytest.raises(ValueError):
        estimation_error_variance(10, -1.0)


def test_zero_error_returns_truth():
    real = _realization()
    est = sample_estimates(real, 0.0, keyed_rng(1, 2))
    np.testing.assert_array_equal(est.Z_hat, real.Z)
    np.testing.assert_array_equal(est.h_d_hat, real.h_d)
    np.testing.assert_array_equal(est.E_Z, 0.0)
    np.testing.assert_array_equal(est.e_d, 0.0)
    # defensive copy: mutating the estimate must not touch the truth
    est.Z_hat[0, 0] = 123.0
    assert real.Z[0, 0] != 123.0


def test_reconstruction_within_rounding():
    real = _realization()
    est = sample_estimates(real, 0.1, keyed_rng(2, 2))
    for truth, hat, err in [(real.Z, est.Z_hat, est.E_Z),
                            (real.h_d, est.h_d_hat, est.e_d)]:
        resid = np.abs((hat + err) - truth)
        scale = np.abs(truth) + np.abs(err)
        assert np.all(resid <= 8 * np.spacing(scale) + 1e-300)


def test_error_moments():
    real = _realization()
    xi = 0.05
    n = 40_000
    rng = keyed_rng(3, 2)
    acc = 0.0
    mean = np.zeros_like(real.Z)
    for _ in range(n):
        est = sample_estimates(real, xi, rng)
        acc += np.mean(np.abs(est.E_Z) ** 2)
        mean += est.E_Z
    assert acc / n == pytest.approx(xi, rel=0.03)
    assert np.max(np.abs(mean / n)) < 5 * np.sqrt(xi / n)


def test_direct_error_variance_matches_cascade():
    real = _realization()
    xi = 0.2
    rng = keyed_rng(4, 2)
    n = 40_000
    acc = 0.0
    for _ in range(n):
        acc += np.mean(np.abs(sample_estimates(real, xi, rng).e_d) ** 2)
    assert acc / n == pytest.approx(xi, rel=0.03)


def test_errors_independent_of_truth():
    # covariance between truth entries and error entries should vanish
    stats = synthetic_statistics(keyed_rng(41, 0), N=1, L=2, M=1,
                                 alpha=[1.0], beta=[1.0], K1=[0.5], K2=[0.5],
                                 corr_r=0.0)
    rng = keyed_rng(5, 2)
    n = 40_000
    acc = 0.0
    for _ in range(n):
        real = sample_channels(stats, rng)
        est = sample_estimates(real, 0.3, rng)
        acc += (real.Z[0, 0] - stats.gbar_diag[0] * stats.Hbar[0, 0]) * np.conj(est.E_Z[0, 0])
    assert np.abs(acc / n) < 0.02


def test_xi_validation():
    real = _realization()
    with pytest.raises(ValueError):
        sample_estimates(real, -0.1, keyed_rng(6, 2))
