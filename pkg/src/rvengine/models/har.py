"""Heterogeneous autoregressive models on daily variance, plain and
quarticity-augmented, estimated by OLS with HAC inference.

Lag structure: daily y_{t-1}, weekly (1/4) sum of lags 2..5, monthly (1/16)
sum of lags 6..22, so the components carry non-overlapping information. The
quarticity variant interacts the daily lag with the demeaned square root of
lagged realized quarticity.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from rvengine.errors import EstimationError
from rvengine.models.base import MIN_ESTIMATION_OBS, ModelFit
from rvengine.models.diagnostics import diagnostics_report
from rvengine.models.hac import newey_west_cov, newey_west_lags

MAX_LAG = 22

HAR_PARAMS = ("omega", "alpha_d", "alpha_w", "alpha_m")
HARQ_PARAMS = ("omega", "alpha_d", "alpha_w", "alpha_m", "alpha_q")


def har_components(y: np.ndarray, t: int) -> tuple[float, float, float]:
    """(daily, weekly, monthly) lag components for target index t (t >= 22)."""
    daily = y[t - 1]
    weekly = y[t - 5 : t - 1].sum() / 4.0
    monthly = y[t - 22 : t - 5].sum() / 16.0
    return float(daily), float(weekly), float(monthly)


def build_har_design(
    y: np.ndarray,
    variant: str = "har",
    rq: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, dict]:
    """Design matrix and aligned targets for rows t = 22 .. T-1 (0-based).

    Returns (X, y_target, meta); for the quarticity variant meta carries the
    estimation-window mean of sqrt(rq) used for demeaning, frozen for
    forecasting.
    """
    y = np.asarray(y, dtype=np.float64)
    t_total = y.size
    if t_total < MAX_LAG + 1:
        raise EstimationError(f"need at least {MAX_LAG + 1} observations, got {t_total}")
    if variant not in ("har", "harq"):
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "harq":
        if rq is None:
            raise EstimationError("the quarticity variant needs an aligned rq series")
        rq = np.asarray(rq, dtype=np.float64)
        if rq.size != t_total:
            raise EstimationError("rq series must align with y")

    ts = np.arange(MAX_LAG, t_total)
    daily = y[ts - 1]
    s4 = np.lib.stride_tricks.sliding_window_view(y, 4).sum(axis=1)
    s17 = np.lib.stride_tricks.sliding_window_view(y, 17).sum(axis=1)
    weekly = s4[ts - 5] / 4.0
    monthly = s17[ts - 22] / 16.0
    cols = [np.ones(ts.size), daily, weekly, monthly]
    meta: dict = {"variant": variant}
    if variant == "harq":
        sqrt_rq = np.sqrt(rq[ts - 1])
        mean_sqrt_rq = float(sqrt_rq.mean())
        cols.append((sqrt_rq - mean_sqrt_rq) * daily)
        meta["mean_sqrt_rq"] = mean_sqrt_rq
    return np.column_stack(cols), y[ts], meta


def fit_har(
    y: np.ndarray,
    variant: str = "har",
    rq: np.ndarray | None = None,
    measure: str | None = None,
    min_obs: int = MIN_ESTIMATION_OBS,
) -> ModelFit:
    """OLS fit with Newey-West standard errors and residual diagnostics."""
    y = np.asarray(y, dtype=np.float64)
    if y.size < min_obs:
        raise EstimationError(f"estimation needs at least {min_obs} observations, got {y.size}")
    X, yt, meta = build_har_design(y, variant=variant, rq=rq)
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise EstimationError("rank-deficient design matrix")
    beta, *_ = np.linalg.lstsq(X, yt, rcond=None)
    fitted = X @ beta
    resid = yt - fitted

    lags = newey_west_lags(yt.size)
    cov = newey_west_cov(X, resid, lags)
    se = np.sqrt(np.diag(cov))
    z = beta / se
    p = 2.0 * stats.norm.sf(np.abs(z))

    sst = float(np.sum((yt - yt.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / sst if sst > 0 else float("nan")

    names = list(HARQ_PARAMS if variant == "harq" else HAR_PARAMS)
    meta["hac_lags"] = lags
    return ModelFit(
        family=variant,
        measure=measure,
        scale="daily_variance",
        param_names=names,
        params=beta,
        std_errors=se,
        z_stats=z,
        p_values=p,
        residuals=resid,
        diagnostics=diagnostics_report(resid),
        n_obs=int(y.size),
        r_squared=r2,
        fitted=fitted,
        extra=meta,
    )
