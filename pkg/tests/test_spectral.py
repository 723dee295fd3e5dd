import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import longpred as lp
from longpred.errors import DomainError, EstimationError
from longpred.series import SamplePath


def test_constant_sample_has_zero_periodogram():
    pgram = lp.periodogram(SamplePath(values=np.full(32, 3.7)))
    np.testing.assert_allclose(pgram.values, 0.0, atol=1e-25)


def test_two_point_ordinate():
    a, b = 1.25, -0.5
    val = lp.periodogram_ordinate(SamplePath(values=np.array([a, b])), np.pi)
    np.testing.assert_allclose(val, (b - a) ** 2 / (4 * np.pi), rtol=1e-14)


def test_grid_frequencies_and_length():
    for T in (2, 3, 17, 256, 1000):
        pgram = lp.periodogram(SamplePath(values=np.arange(float(T)) ** 1.5))
        m = (T - 1) // 2
        assert pgram.values.size == m
        np.testing.assert_allclose(pgram.freqs,
                                   2 * np.pi * np.arange(1, m + 1) / T)


def test_fft_path_matches_direct_ordinate():
    rng = np.random.default_rng(3)
    sample = SamplePath(values=rng.normal(size=256))
    pgram = lp.periodogram(sample)
    direct = [lp.periodogram_ordinate(sample, lam) for lam in pgram.freqs[:6]]
    np.testing.assert_allclose(pgram.values[:6], direct, rtol=1e-10)


@pytest.mark.parametrize("T", [2, 3, 17, 256, 1000])
def test_parseval(T):
    rng = np.random.default_rng(T)
    y = rng.normal(size=T) * 3.0 + 1.0
    sample = SamplePath(values=y)
    # all nonzero Fourier frequencies, both signs
    total = sum(lp.periodogram_ordinate(sample, 2 * np.pi * j / T)
                for j in range(1, T))
    lhs = (2 * np.pi / T) * total
    yc = y - y.mean()
    np.testing.assert_allclose(lhs, np.dot(yc, yc) / T, rtol=1e-10)


def test_shift_invariance_exact_on_binary_grid():
    # integer samples, dyadic length: the demeaned values are exactly
    # representable, so adding an integer constant changes nothing at all
    rng = np.random.default_rng(8)
    y = rng.integers(-50, 50, size=256).astype(float)
    base = lp.periodogram(SamplePath(values=y))
    shifted = lp.periodogram(SamplePath(values=y + 1024.0))
    np.testing.assert_array_equal(base.values, shifted.values)


@given(st.lists(st.floats(-50.0, 50.0), min_size=4, max_size=64),
       st.floats(-100.0, 100.0))
def test_shift_invariance_general(values, c):
    y = np.asarray(values)
    base = lp.periodogram(SamplePath(values=y))
    shifted = lp.periodogram(SamplePath(values=y + c))
    np.testing.assert_allclose(shifted.values, base.values,
                               rtol=1e-7, atol=1e-10)


# ---------------------------------------------------------------------------
# Whittle objective


def test_flat_periodogram_prefers_smallest_d():
    pgram = lp.periodogram(SamplePath(values=np.random.default_rng(0)
                                      .normal(size=512)))
    flat = lp.Periodogram(freqs=pgram.freqs,
                          values=np.full_like(pgram.values, 0.2), T=pgram.T)
    grid = np.linspace(0.01, 0.49, 25)
    objs = [lp.whittle_objective(flat, d) for d in grid]
    assert int(np.argmin(objs)) == 0
    assert np.all(np.isfinite(objs))


def test_noiseless_self_consistency():
    T = 8192
    m = (T - 1) // 2
    freqs = 2 * np.pi * np.arange(1, m + 1) / T
    model = lp.LongMemoryModel.fi(0.3)
    synthetic = lp.Periodogram(freqs=freqs,
                               values=lp.spectral_density(model, freqs), T=T)
    grid = np.arange(0.05, 0.45, 0.001)
    objs = [lp.whittle_objective(synthetic, d) for d in grid]
    best = grid[int(np.argmin(objs))]
    assert best == pytest.approx(0.30, abs=0.001)


def test_profiled_sigma2_self_consistency():
    T = 4096
    m = (T - 1) // 2
    freqs = 2 * np.pi * np.arange(1, m + 1) / T
    model = lp.LongMemoryModel.fi(0.3, sigma2_eps=2.0)
    synthetic = lp.Periodogram(freqs=freqs,
                               values=lp.spectral_density(model, freqs), T=T)
    np.testing.assert_allclose(lp.whittle_profiled_sigma2(synthetic, 0.3), 2.0,
                               rtol=0.01)


def test_objective_domain():
    pgram = lp.periodogram(SamplePath(values=np.arange(64.0)))
    with pytest.raises(DomainError):
        lp.whittle_objective(pgram, 0.0)
    with pytest.raises(DomainError):
        lp.whittle_objective(pgram, 0.5)


@given(st.integers(0, 2 ** 32 - 1))
def test_objective_finite_for_random_samples(seed):
    rng = np.random.default_rng(seed)
    pgram = lp.periodogram(SamplePath(values=rng.normal(size=96)))
    for d in (0.01, 0.1, 0.25, 0.49):
        assert np.isfinite(lp.whittle_objective(pgram, d))


# ---------------------------------------------------------------------------
# whittle_fit


def test_fit_requires_length_and_bounds():
    with pytest.raises(ValueError):
        lp.whittle_fit(SamplePath(values=np.ones(32)))
    with pytest.raises(DomainError):
        lp.whittle_fit(SamplePath(values=np.arange(128.0)),
                       d_bounds=(0.0, 0.4))


def test_fit_degenerate_sample():
    with pytest.raises(EstimationError):
        lp.whittle_fit(SamplePath(values=np.full(128, 2.0)))


def test_fit_deterministic_bit_for_bit():
    rng = np.random.default_rng(5)
    sample = SamplePath(values=rng.normal(size=512))
    f1 = lp.whittle_fit(sample)
    f2 = lp.whittle_fit(sample)
    assert f1.d_hat == f2.d_hat
    assert f1.sigma2_hat == f2.sigma2_hat


def test_fit_refinement_resolution():
    rng = np.random.default_rng(6)
    sample = SamplePath(values=rng.normal(size=512))
    fit = lp.whittle_fit(sample)
    trace_best = fit.grid_trace[np.argmin(fit.grid_trace[:, 1]), 0]
    # refinement stays inside one grid cell of the coarse minimiser
    step = fit.grid_trace[1, 0] - fit.grid_trace[0, 0]
    assert abs(fit.d_hat - trace_best) <= step


def test_whittle_consistency_mc(whittle_mc_fits):
    dh = np.array([f.d_hat for f in whittle_mc_fits])
    assert np.mean(np.abs(dh - 0.3)) <= 0.05


def test_whittle_sigma2_mc(whittle_mc_fits):
    s2 = np.array([f.sigma2_hat for f in whittle_mc_fits])
    np.testing.assert_allclose(np.mean(s2), 1.0, rtol=0.10)


def test_whittle_near_white_noise(near_white_whittle_dhats):
    assert np.mean(near_white_whittle_dhats <= 0.05) >= 0.90
