"""Sequential one-step-ahead forecasting with empirical intervals and losses.

Parameters stay fixed at their in-sample estimates; each step conditions on
the realized history through t-1. Intervals come from in-sample residual
quantiles: additive for the autoregressive family (lower bound truncated at
zero), multiplicative for the multiplicative-error family.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from rvengine import _kernels
from rvengine.errors import ForecastError
from rvengine.models.base import HAR_FAMILIES, MEM_FAMILIES, ModelFit
from rvengine.models.har import har_components
from rvengine.models.mem import _PERSISTENCE_W, _to_full

log = logging.getLogger(__name__)

MIN_HORIZON = 5
MAX_HORIZON = 22


@dataclass
class ForecastResult:
    horizon: int
    point: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    actuals: np.ndarray
    mse: float
    qlike: float

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "point": self.point.tolist(),
            "ci_low": self.ci_low.tolist(),
            "ci_high": self.ci_high.tolist(),
            "actuals": self.actuals.tolist(),
            "mse": self.mse,
            "qlike": self.qlike,
        }


def one_step_path(
    fit: ModelFit,
    y_full: np.ndarray,
    r_sign: np.ndarray | None = None,
    rq: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Point forecasts and 95% bands for every post-sample index.

    Uncapped; `forecast` slices this to the allowed horizon. Useful on its own
    for long coverage evaluations.
    """
    y_full = np.asarray(y_full, dtype=np.float64)
    t0 = fit.n_obs
    if y_full.size <= t0:
        raise ForecastError("no post-estimation observations")

    if fit.family in HAR_FAMILIES:
        beta = fit.params
        points = np.empty(y_full.size - t0)
        for i, t in enumerate(range(t0, y_full.size)):
            d, w, m = har_components(y_full, t)
            row = [1.0, d, w, m]
            if fit.family == "harq":
                if rq is None:
                    raise ForecastError("the quarticity variant needs the rq series to forecast")
                row.append((np.sqrt(rq[t - 1]) - fit.extra["mean_sqrt_rq"]) * d)
            points[i] = float(np.dot(beta, row))
        q_lo, q_hi = np.quantile(fit.residuals, [0.025, 0.975])
        lo = np.maximum(points + q_lo, 0.0)
        hi = points + q_hi
        return points, lo, hi

    if fit.family in MEM_FAMILIES:
        full = _to_full(fit.params, fit.family)
        if fit.family == "mem11":
            yneg = np.zeros_like(y_full)
        else:
            if r_sign is None:
                raise ForecastError("asymmetric families need the return-sign series to forecast")
            yneg = np.where(np.asarray(r_sign)[: y_full.size] < 0, y_full, 0.0)
        mu0 = full[0] / (1.0 - float(_PERSISTENCE_W @ full))
        mu = _kernels.mem_recursion(
            *full, y_full, yneg, mu0, fit.extra["ybar"], fit.extra["ynegbar"]
        )
        points = mu[t0:]
        q_lo, q_hi = np.quantile(fit.extra["eps"], [0.025, 0.975])
        return points, points * q_lo, points * q_hi

    raise ForecastError(f"unknown family {fit.family!r}")


def forecast(
    fit: ModelFit,
    y_full: np.ndarray,
    r_sign: np.ndarray | None = None,
    rq: np.ndarray | None = None,
    horizon: int | None = None,
) -> ForecastResult:
    """Forecast min(available, 22) steps; refuses below five post-sample points."""
    y_full = np.asarray(y_full, dtype=np.float64)
    available = y_full.size - fit.n_obs
    if available < MIN_HORIZON:
        raise ForecastError(
            f"forecasting needs at least {MIN_HORIZON} post-estimation observations, have {available}"
        )
    h = min(available, MAX_HORIZON)
    if horizon is not None:
        h = min(h, int(horizon))
    points, lo, hi = one_step_path(fit, y_full[: fit.n_obs + h], r_sign=r_sign, rq=rq)
    actuals = y_full[fit.n_obs : fit.n_obs + h]

    mse = float(np.mean((actuals - points) ** 2))
    if np.all(actuals > 0) and np.all(points > 0):
        ratio = actuals / points
        qlike = float(np.mean(ratio - np.log(ratio) - 1.0))
    else:
        log.warning("non-positive forecast or actual: QLIKE undefined for this window")
        qlike = float("nan")
    return ForecastResult(h, points, lo, hi, actuals, mse, qlike)
