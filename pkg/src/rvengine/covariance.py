"""Per-day realized covariance, bipower covariance, and semicovariances over
a synchronized return panel.

Sign convention for the semicovariance split: zero returns fall in the
negative partition, which keeps the four-way decomposition exact and lets
zero-padded inactive assets contribute nothing.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass

import numpy as np

from rvengine.sampling import SynchronizedPanel

COVARIANCE_MEASURES = ("rcov", "rbpcov", "rscov_p", "rscov_n", "rscov_mp", "rscov_mn")

MU1 = math.sqrt(2.0 / math.pi)  # first absolute moment of a standard normal


@dataclass
class CovarianceSet:
    """All per-day covariance matrices for one asset group."""

    symbols: list[str]
    date: dt.date
    rcov: np.ndarray
    rbpcov: np.ndarray
    rscov_p: np.ndarray
    rscov_n: np.ndarray
    rscov_mp: np.ndarray
    rscov_mn: np.ndarray

    def matrix(self, measure: str) -> np.ndarray:
        if measure not in COVARIANCE_MEASURES:
            raise KeyError(measure)
        return getattr(self, measure)

    def to_long_records(self) -> list[dict]:
        rows = []
        for measure in COVARIANCE_MEASURES:
            mat = self.matrix(measure)
            for i, si in enumerate(self.symbols):
                for j, sj in enumerate(self.symbols):
                    rows.append(
                        {"date": self.date, "asset_i": si, "asset_j": sj,
                         "measure": measure, "value": float(mat[i, j])}
                    )
        return rows


def realized_covariance(returns: np.ndarray) -> np.ndarray:
    """Sum of per-interval return outer products."""
    r = np.asarray(returns, dtype=np.float64)
    if r.size == 0:
        raise ValueError("empty panel")
    return r.T @ r


def bipower_covariance(returns: np.ndarray) -> np.ndarray:
    """Jump-robust covariance via the polarization of adjacent absolute returns.

    Diagonal entries reduce to each asset's bipower variation. Needs at least
    two intervals; otherwise every entry is NaN.
    """
    r = np.asarray(returns, dtype=np.float64)
    m, n = r.shape
    if m < 2:
        return np.full((n, n), np.nan)
    s = np.abs(r[:, :, None] + r[:, None, :])
    d = np.abs(r[:, :, None] - r[:, None, :])
    core = np.sum(s[:-1] * s[1:] - d[:-1] * d[1:], axis=0)
    return (MU1**-2 / 4.0) * core


def semicovariances(returns: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(concordant-positive, concordant-negative, mixed +/-, mixed -/+)."""
    r = np.asarray(returns, dtype=np.float64)
    if r.size == 0:
        raise ValueError("empty panel")
    rp = np.where(r > 0, r, 0.0)
    rn = np.where(r <= 0, r, 0.0)
    p = rp.T @ rp
    n = rn.T @ rn
    mp = rp.T @ rn
    mn = np.ascontiguousarray(mp.T)  # the mixed pair is an exact transpose
    return p, n, mp, mn


def covariance_set(panel: SynchronizedPanel) -> CovarianceSet:
    """Every covariance measure for one synchronized panel day."""
    r = panel.returns
    p, n, mp, mn = semicovariances(r)
    return CovarianceSet(
        symbols=list(panel.symbols),
        date=panel.date,
        rcov=realized_covariance(r),
        rbpcov=bipower_covariance(r),
        rscov_p=p,
        rscov_n=n,
        rscov_mp=mp,
        rscov_mn=mn,
    )
