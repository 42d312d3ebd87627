"""Parity between the compiled kernels and the NumPy fallback."""

import numpy as np
import pytest

from rvengine._kernels import _fallback

core = pytest.importorskip("rvengine._kernels._core")


@pytest.mark.parametrize("seed", range(6))
def test_outlier_mask_parity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 3000))
    prices = 50 * np.exp(np.cumsum(rng.standard_normal(n)) * 2e-4)
    prices[rng.integers(0, n, size=max(n // 50, 1))] *= rng.uniform(1.02, 1.2)
    k = int(rng.choice([4, 20, 60, 80]))
    delta = float(rng.uniform(0.05, 0.5))
    gamma = float(rng.uniform(0.01, 0.2))
    np.testing.assert_array_equal(
        core.bg_outlier_mask(prices, k, delta, gamma),
        _fallback.bg_outlier_mask(prices, k, delta, gamma),
    )


def test_outlier_mask_short_series_parity():
    prices = np.array([10.0, 10.0, 30.0])
    assert core.bg_outlier_mask(prices, 60, 0.1, 0.06).tolist() == \
        _fallback.bg_outlier_mask(prices, 60, 0.1, 0.06).tolist() == [0, 0, 1]


@pytest.mark.parametrize("seed", range(4))
def test_previous_tick_parity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 2000))
    times = np.sort(rng.choice(np.arange(0, 86_400_000, 17), size=n, replace=False)).astype(np.int64)
    prices = rng.uniform(1, 100, n)
    grid = np.arange(0, 86_400_000, 60_000, dtype=np.int64)
    np.testing.assert_array_equal(
        core.previous_tick_fill(times, prices, grid),
        _fallback.previous_tick_fill(times, prices, grid),
    )


def test_autocov_lag_overflow_and_values():
    rng = np.random.default_rng(1)
    r = rng.standard_normal(500) * 0.01
    a = _fallback.autocov(r, 510)
    assert a[0] == pytest.approx(float(r @ r), rel=1e-14)
    assert a[3] == pytest.approx(float(r[3:] @ r[:-3]), rel=1e-14)
    assert a[500:].tolist() == [0.0] * 11  # lags past the sample are zero


def test_mem_recursion_parity_bitwise():
    rng = np.random.default_rng(2)
    y = rng.gamma(4, 0.5, 1000) + 0.01
    yneg = np.where(rng.random(1000) < 0.5, y, 0.0)
    args = (0.1, 0.3, -0.05, 0.6, 0.08, y, yneg, 1.2, float(y.mean()), float(y.mean()) / 2)
    np.testing.assert_array_equal(core.mem_recursion(*args), _fallback.mem_recursion(*args))
    d0 = np.array([0.5, 0.1, 0.1, 0.1, 0.05])
    mu_c, dmu_c = core.mem_recursion_grad(*args, d0)
    mu_f, dmu_f = _fallback.mem_recursion_grad(*args, d0)
    np.testing.assert_array_equal(mu_c, mu_f)
    np.testing.assert_allclose(dmu_c, dmu_f, rtol=1e-14)


def test_backend_reports_name():
    from rvengine import _kernels

    assert _kernels.BACKEND in ("cython", "python")
    assert core.BACKEND == "cython"
    assert _fallback.BACKEND == "python"
