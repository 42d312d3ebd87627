"""Heteroskedasticity- and autocorrelation-consistent covariance for OLS."""

from __future__ import annotations

import math

import numpy as np

from rvengine.errors import EstimationError


def newey_west_lags(t_obs: int) -> int:
    """Automatic lag rule: floor(4 (T/100)^(2/9))."""
    return math.floor(4.0 * (t_obs / 100.0) ** (2.0 / 9.0))


def newey_west_cov(X: np.ndarray, e: np.ndarray, lags: int) -> np.ndarray:
    """(X'X)^-1 S (X'X)^-1 with Bartlett weights w_l = 1 - l/(L+1).

    lags = 0 reduces to the heteroskedasticity-only (White) sandwich.
    """
    X = np.asarray(X, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    if lags < 0:
        raise ValueError("lags must be non-negative")
    xtx = X.T @ X
    try:
        xtx_inv = np.linalg.inv(xtx)
    except np.linalg.LinAlgError as exc:
        raise EstimationError("singular design: X'X is not invertible") from exc
    xe = X * e[:, None]
    s = xe.T @ xe
    for lag in range(1, lags + 1):
        w = 1.0 - lag / (lags + 1.0)
        gam = xe[lag:].T @ xe[:-lag]
        s += w * (gam + gam.T)
    cov = xtx_inv @ s @ xtx_inv
    return (cov + cov.T) / 2.0
