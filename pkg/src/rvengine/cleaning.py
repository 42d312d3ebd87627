"""Tick-price outlier detection and replacement for stock series.

A price is flagged when it deviates from the trimmed mean of its neighborhood
by at least three trimmed standard deviations plus a granularity constant.
The granularity term keeps constant-price stretches from tripping the rule.
Quote-driven classes (exchange rates, futures) pass through untouched; their
mid-quote prices need no filtering.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from rvengine import _kernels
from rvengine.calendars import AssetClass
from rvengine.ticks import FLAG_VALID, TickSeries

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CleaningParams:
    """Detection configuration; defaults are the production setting."""

    k: int = 60  # neighborhood size (even)
    delta: float = 0.1  # trim proportion
    gamma: float = 0.06  # granularity, in price units

    def __post_init__(self):
        if self.k < 4 or self.k % 2 != 0:
            raise ValueError("k must be an even integer >= 4")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")


@dataclass
class CleaningReport:
    symbol: str
    date: object
    n_obs: int
    n_outliers: int
    outlier_indices: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))


def trimmed_stats(window, delta: float) -> tuple[float, float]:
    """Trimmed mean and population sd of a price window.

    floor(len(window) * delta / 2) observations are dropped from each tail
    after sorting; the sd of the survivors is population-normalised.
    """
    vals = np.sort(np.asarray(window, dtype=np.float64))
    if vals.size == 0:
        raise ValueError("trimmed_stats needs a non-empty window")
    trim = int(vals.size * delta / 2.0)
    mid = vals[trim : vals.size - trim]
    assert mid.size > 0, "trimming removed every observation"
    mean = float(mid.mean())
    sd = float(np.sqrt(np.maximum(np.square(mid).mean() - mean * mean, 0.0)))
    return mean, sd


def detect_outliers(
    series: TickSeries, params: CleaningParams | None = None
) -> tuple[TickSeries, CleaningReport]:
    """Flag outlying in-session prices; returns the flagged series and a report.

    Only in-session records are tested, each against its own trimmed
    neighborhood (self excluded). Days shorter than the neighborhood fall back
    to using the whole day as one window. Detected records get flag = NaN so
    provenance survives storage; prices are left untouched here.
    """
    params = params or CleaningParams()
    if series.asset_class is not AssetClass.STOCK:
        return series, CleaningReport(series.symbol, series.date, len(series), 0)

    in_sess = np.flatnonzero(series.in_session_mask)
    n_obs = int(in_sess.size)
    if n_obs < 2:
        return series, CleaningReport(series.symbol, series.date, n_obs, 0)

    mask = _kernels.bg_outlier_mask(
        series.prices[in_sess], params.k, params.delta, params.gamma
    )
    hit = in_sess[mask.astype(bool)]
    flags = series.flags.copy()
    flags[hit] = np.nan
    report = CleaningReport(series.symbol, series.date, n_obs, int(hit.size), hit.astype(np.int64))
    return replace(series, flags=flags), report


def replace_outliers(series: TickSeries) -> TickSeries:
    """Replace each flagged price by the mean of its nearest valid neighbors.

    Up to two preceding and two following valid in-session prices are
    averaged; at the day boundaries fewer are available. An outlier with no
    valid neighbor keeps its flag and gets a NaN price, which excludes it from
    sampling. Valid records are never modified; the operation is idempotent.
    """
    if series.asset_class is not AssetClass.STOCK:
        return series
    out_idx = np.flatnonzero(series.outlier_mask)
    if out_idx.size == 0:
        return series
    valid_idx = np.flatnonzero(series.flags == FLAG_VALID)
    prices = series.prices.copy()
    n_unreplaced = 0
    pos = np.searchsorted(valid_idx, out_idx)
    for i, p in zip(out_idx, pos):
        before = valid_idx[max(0, p - 2) : p]
        after = valid_idx[p : p + 2]
        neighbors = np.concatenate([before, after])
        if neighbors.size == 0:
            prices[i] = np.nan
            n_unreplaced += 1
            continue
        prices[i] = float(series.prices[neighbors].mean())
    if n_unreplaced:
        log.warning(
            "%s %s: %d outliers had no valid neighbors and stay excluded",
            series.symbol, series.date, n_unreplaced,
        )
    return replace(series, prices=prices)
