import datetime as dt
import math

import numpy as np
import pytest

from rvengine.covariance import (
    COVARIANCE_MEASURES,
    MU1,
    bipower_covariance,
    covariance_set,
    realized_covariance,
    semicovariances,
)
from rvengine.measures import return_based_measures
from rvengine.sampling import SynchronizedPanel


def _panel(returns, symbols=None):
    returns = np.asarray(returns, dtype=np.float64)
    n = returns.shape[1]
    symbols = symbols or [f"A{i}" for i in range(n)]
    times = np.arange(returns.shape[0] + 1, dtype=np.int64) * 60_000
    return SynchronizedPanel(symbols, dt.date(2024, 3, 11), 60, times, returns)


class TestRealizedCovariance:
    def test_univariate_degeneracy_equals_rv(self):
        r = np.random.default_rng(0).standard_normal(300)[:, None] * 0.01
        rc = realized_covariance(r)
        assert rc.shape == (1, 1)
        assert rc[0, 0] == pytest.approx(return_based_measures(r[:, 0])["rv"], rel=1e-12)

    def test_identical_columns_rank_one(self):
        col = np.random.default_rng(1).standard_normal(100) * 0.01
        rc = realized_covariance(np.column_stack([col, col]))
        assert rc[0, 0] == pytest.approx(rc[0, 1], rel=1e-12)
        assert np.linalg.matrix_rank(rc, tol=1e-14) == 1

    def test_two_interval_hand_sum(self):
        r = np.array([[0.01, 0.02], [-0.02, 0.01]])
        rc = realized_covariance(r)
        assert rc[0, 1] == pytest.approx(0.01 * 0.02 + (-0.02) * 0.01, abs=1e-18)
        assert rc[0, 1] == pytest.approx(0.0, abs=1e-18)

    def test_empty_panel_rejected(self):
        with pytest.raises(ValueError):
            realized_covariance(np.empty((0, 2)))

    def test_psd_on_random_panels(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            r = rng.standard_normal((50, 4)) * 0.01
            eig = np.linalg.eigvalsh(realized_covariance(r))
            assert eig.min() >= -1e-10


class TestBipowerCovariance:
    def test_mu1_constant(self):
        assert MU1 == pytest.approx(0.7979, abs=1e-4)
        assert MU1 == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)

    def test_diagonal_equals_univariate_bv(self):
        rng = np.random.default_rng(3)
        r = rng.standard_normal((200, 3)) * 0.01
        bc = bipower_covariance(r)
        for i in range(3):
            assert bc[i, i] == pytest.approx(return_based_measures(r[:, i])["bv"], rel=1e-10)

    def test_independent_columns_near_zero_off_diagonal(self):
        rng = np.random.default_rng(4)
        acc = np.zeros((2, 2))
        reps = 200
        for _ in range(reps):
            r = rng.standard_normal((390, 2)) * 0.01
            acc += bipower_covariance(r)
        mean = acc / reps
        # off-diagonals average to ~0, diagonals to ~390 * 1e-4
        assert abs(mean[0, 1]) < 5e-5 * 390 / 10
        assert mean[0, 0] == pytest.approx(390 * 1e-4, rel=0.05)

    def test_too_short_panel_absent(self):
        bc = bipower_covariance(np.array([[0.01, 0.02]]))
        assert np.isnan(bc).all()

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        bc = bipower_covariance(rng.standard_normal((100, 4)) * 0.01)
        np.testing.assert_allclose(bc, bc.T, rtol=1e-12)


class TestSemicovariances:
    def test_four_way_decomposition(self):
        rng = np.random.default_rng(6)
        r = rng.standard_normal((300, 5)) * 0.01
        p, n, mp, mn = semicovariances(r)
        rc = realized_covariance(r)
        np.testing.assert_allclose(p + n + mp + mn, rc, rtol=1e-12, atol=1e-20)

    def test_all_positive_returns(self):
        r = np.abs(np.random.default_rng(7).standard_normal((50, 3))) * 0.01 + 1e-6
        p, n, mp, mn = semicovariances(r)
        assert np.all(n == 0) and np.all(mp == 0) and np.all(mn == 0)
        np.testing.assert_allclose(p, realized_covariance(r), rtol=1e-12)

    def test_diagonals_match_univariate_semivariances(self):
        rng = np.random.default_rng(8)
        r = rng.standard_normal((250, 3)) * 0.01
        p, n, _, _ = semicovariances(r)
        for i in range(3):
            uni = return_based_measures(r[:, i])
            assert p[i, i] == pytest.approx(uni["rsp"], rel=1e-12)
            assert n[i, i] == pytest.approx(uni["rsn"], rel=1e-12)

    def test_mixed_pair_exact_transpose_zero_diagonal(self):
        rng = np.random.default_rng(9)
        r = rng.standard_normal((100, 4)) * 0.01
        _, _, mp, mn = semicovariances(r)
        np.testing.assert_array_equal(mn, mp.T)  # exact, not approximate
        np.testing.assert_array_equal(np.diag(mp), np.zeros(4))
        np.testing.assert_array_equal(np.diag(mn), np.zeros(4))

    def test_zero_returns_fall_in_negative_partition(self):
        r = np.array([[0.0, 0.01], [0.02, 0.0]])
        p, n, mp, mn = semicovariances(r)
        # zeros contribute nothing numerically but sit in the negative split
        np.testing.assert_allclose(p + n + mp + mn, realized_covariance(r), rtol=1e-15)


class TestCovarianceSet:
    def test_full_set_and_permutation_consistency(self):
        rng = np.random.default_rng(10)
        r = rng.standard_normal((120, 3)) * 0.01
        cs = covariance_set(_panel(r, ["X", "Y", "Z"]))
        perm = [2, 0, 1]
        cs_p = covariance_set(_panel(r[:, perm], ["Z", "X", "Y"]))
        for measure in COVARIANCE_MEASURES:
            a = cs.matrix(measure)
            b = cs_p.matrix(measure)
            np.testing.assert_allclose(b, a[np.ix_(perm, perm)], rtol=1e-12, atol=1e-20)

    def test_long_format_records(self):
        r = np.random.default_rng(11).standard_normal((60, 2)) * 0.01
        cs = covariance_set(_panel(r))
        rows = cs.to_long_records()
        assert len(rows) == len(COVARIANCE_MEASURES) * 4
        one = rows[0]
        assert set(one) == {"date", "asset_i", "asset_j", "measure", "value"}
