"""Residual diagnostics: Ljung-Box on levels and squares, plus the ARCH LM test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass
class DiagnosticsReport:
    lb_stat: float
    lb_pvalue: float
    lb2_stat: float
    lb2_pvalue: float
    arch_stat: float
    arch_pvalue: float
    lags: int = 5

    def to_dict(self) -> dict:
        return {
            "lags": self.lags,
            "lb_stat": self.lb_stat,
            "lb_pvalue": self.lb_pvalue,
            "lb2_stat": self.lb2_stat,
            "lb2_pvalue": self.lb2_pvalue,
            "arch_stat": self.arch_stat,
            "arch_pvalue": self.arch_pvalue,
        }


def ljung_box(u: np.ndarray, lags: int = 5) -> tuple[float, float]:
    """Q = T(T+2) sum_k rho_k^2 / (T-k) against chi-square(lags).

    A constant series carries no autocorrelation signal: statistic 0, p 1.
    """
    u = np.asarray(u, dtype=np.float64)
    t_obs = u.size
    if t_obs <= lags + 1:
        raise ValueError(f"need more than {lags + 1} observations")
    ub = u - u.mean()
    denom = float(np.dot(ub, ub))
    if denom == 0.0:
        return 0.0, 1.0
    q = 0.0
    for k in range(1, lags + 1):
        rho = float(np.dot(ub[k:], ub[:-k])) / denom
        q += rho * rho / (t_obs - k)
    q *= t_obs * (t_obs + 2.0)
    return q, float(stats.chi2.sf(q, lags))


def arch_lm(u: np.ndarray, lags: int = 5) -> tuple[float, float]:
    """Engle's LM test: n R^2 from regressing u_t^2 on its own lags."""
    u = np.asarray(u, dtype=np.float64)
    if u.size <= lags + 1:
        raise ValueError(f"need more than {lags + 1} observations")
    u2 = u * u
    y = u2[lags:]
    n = y.size
    X = np.column_stack([np.ones(n)] + [u2[lags - k : -k] for k in range(1, lags + 1)])
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0.0:
        return 0.0, 1.0
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    ssr = float(np.sum((y - X @ beta) ** 2))
    r2 = 1.0 - ssr / sst
    stat = n * r2
    return stat, float(stats.chi2.sf(stat, lags))


def diagnostics_report(u: np.ndarray, lags: int = 5) -> DiagnosticsReport:
    """Ljung-Box on residuals and squared residuals plus the ARCH test."""
    lb_stat, lb_p = ljung_box(u, lags)
    lb2_stat, lb2_p = ljung_box(np.asarray(u) ** 2, lags)
    arch_stat, arch_p = arch_lm(u, lags)
    return DiagnosticsReport(lb_stat, lb_p, lb2_stat, lb2_p, arch_stat, arch_p, lags)
