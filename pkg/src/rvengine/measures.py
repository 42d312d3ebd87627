"""Daily univariate measures: range-based, return-based, subsampled, realized
kernel, and the assembled per-day row.

Conventions: the daily high/low scan every in-session tick including odd
lots; open/close exclude odd lots (stocks). Return-based measures use
previous-tick grids at 1 and 5 minutes; subsampled variants average five
5-minute grids shifted by one minute each.
"""

from __future__ import annotations

import datetime as dt
import logging
import math
from dataclasses import dataclass, fields

import numpy as np

from rvengine.calendars import MS_PER_SECOND, AssetClass, TradingSession
from rvengine.kernel import KernelConfig, realized_kernel
from rvengine.sampling import (
    day_eligible,
    log_returns,
    previous_tick_grid,
    subsample_grids,
    view_ticks,
)
from rvengine.ticks import TickSeries

log = logging.getLogger(__name__)

RETURN_MEASURES = ("rv", "rq", "bv", "rsp", "rsn", "medrv", "minrv")
SUBSAMPLED = RETURN_MEASURES  # every return-based measure has a 5-minute _ss variant

# Exact output column order for measure tables.
MEASURE_COLUMNS = (
    "pr", "gkr", "rr5",
    "rv1", "rv5", "rv5_ss",
    "rq1", "rq5", "rq5_ss",
    "bv1", "bv5", "bv5_ss",
    "rsp1", "rsp5", "rsp5_ss",
    "rsn1", "rsn5", "rsn5_ss",
    "medrv1", "medrv5", "medrv5_ss",
    "minrv1", "minrv5", "minrv5_ss",
    "rk",
)

_MEDRV_SCALE = math.pi / (6.0 - 4.0 * math.sqrt(3.0) + math.pi)
_MINRV_SCALE = math.pi / (math.pi - 2.0)
_RANGE_SCALE = 1.0 / (4.0 * math.log(2.0))

# Smallest return count each measure is defined for.
_MIN_M = {"rv": 2, "rq": 2, "bv": 2, "rsp": 2, "rsn": 2, "medrv": 3, "minrv": 2}


@dataclass
class DailyMeasures:
    """One symbol-day row: OHLC, activity, and every Table-style measure."""

    symbol: str
    date: dt.date
    open: float
    high: float
    low: float
    close: float
    volume: int | None
    trades: int | None
    pr: float = float("nan")
    gkr: float = float("nan")
    rr5: float = float("nan")
    rv1: float = float("nan")
    rv5: float = float("nan")
    rv5_ss: float = float("nan")
    rq1: float = float("nan")
    rq5: float = float("nan")
    rq5_ss: float = float("nan")
    bv1: float = float("nan")
    bv5: float = float("nan")
    bv5_ss: float = float("nan")
    rsp1: float = float("nan")
    rsp5: float = float("nan")
    rsp5_ss: float = float("nan")
    rsn1: float = float("nan")
    rsn5: float = float("nan")
    rsn5_ss: float = float("nan")
    medrv1: float = float("nan")
    medrv5: float = float("nan")
    medrv5_ss: float = float("nan")
    minrv1: float = float("nan")
    minrv5: float = float("nan")
    minrv5_ss: float = float("nan")
    rk: float = float("nan")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def return_based_measures(r: np.ndarray) -> dict[str, float]:
    """All return-based measures for one return vector.

    Measures whose window does not fit (fewer than 2 returns overall, fewer
    than 3 for the median variant) come back as NaN.
    """
    r = np.asarray(r, dtype=np.float64)
    m = r.size
    out = {k: float("nan") for k in RETURN_MEASURES}
    if m < 2:
        return out
    sq = r * r
    ab = np.abs(r)
    out["rv"] = float(sq.sum())
    out["rq"] = float(m / 3.0 * np.sum(sq * sq))
    out["bv"] = float(math.pi / 2.0 * np.sum(ab[1:] * ab[:-1]))
    out["rsp"] = float(sq[r > 0].sum())
    out["rsn"] = float(sq[r < 0].sum())
    out["minrv"] = float(
        _MINRV_SCALE * m / (m - 1.0) * np.sum(np.minimum(ab[1:], ab[:-1]) ** 2)
    )
    if m >= 3:
        triplets = np.column_stack([ab[:-2], ab[1:-1], ab[2:]])
        out["medrv"] = float(
            _MEDRV_SCALE * m / (m - 2.0) * np.sum(np.median(triplets, axis=1) ** 2)
        )
    return out


def range_measures(
    high: float, low: float, open_: float, close: float,
    interval_highs: np.ndarray, interval_lows: np.ndarray,
) -> tuple[float, float, float]:
    """(pr, gkr, rr) from the daily extremes and per-interval extremes."""
    if high < low:
        raise ValueError("daily high below low")
    hl = math.log(high / low)
    co = math.log(close / open_)
    pr = _RANGE_SCALE * hl * hl
    gkr = 0.5 * hl * hl - (2.0 * math.log(2.0) - 1.0) * co * co
    rr = float(_RANGE_SCALE * np.sum(np.log(interval_highs / interval_lows) ** 2))
    return pr, gkr, rr


def interval_extremes(
    times: np.ndarray, prices: np.ndarray, session: TradingSession, interval_s: int = 300
) -> tuple[np.ndarray, np.ndarray]:
    """Per-interval high/low over right-closed intervals; empty bins dropped.

    A tick exactly on the open is assigned to the first interval.
    """
    step = interval_s * MS_PER_SECOND
    n_bins = (session.close_ms - session.open_ms) // step
    idx = np.ceil((times - session.open_ms) / step).astype(np.int64)
    idx[idx == 0] = 1
    keep = (idx >= 1) & (idx <= n_bins)
    idx = idx[keep] - 1
    px = prices[keep]
    if px.size == 0:
        return np.empty(0), np.empty(0)
    highs = np.full(n_bins, -np.inf)
    lows = np.full(n_bins, np.inf)
    np.maximum.at(highs, idx, px)
    np.minimum.at(lows, idx, px)
    filled = np.isfinite(highs)
    return highs[filled], lows[filled]


def subsampled_measures(
    series: TickSeries,
    session: TradingSession,
    base_s: int = 300,
    shift_s: int = 60,
    count: int = 5,
    view: str = "cleaned",
) -> dict[str, float]:
    """Mean of each return-based measure over the shifted grids.

    Subsamples too short for a given measure are skipped; if every subsample
    is skipped the measure is absent.
    """
    grids = subsample_grids(series, session, base_s=base_s, shift_s=shift_s, count=count, view=view)
    per_grid = [return_based_measures(log_returns(g).returns) for g in grids]
    out = {}
    for name in RETURN_MEASURES:
        vals = [pg[name] for pg in per_grid if not math.isnan(pg[name])]
        out[name] = float(np.mean(vals)) if vals else float("nan")
    return out


def daily_row(
    series: TickSeries,
    session: TradingSession,
    kernel_cfg: KernelConfig = KernelConfig(),
    view: str = "cleaned",
) -> DailyMeasures | None:
    """Assemble the full measures row for one symbol-day.

    Returns None for ineligible days (minimum-data rule). High/low include
    odd lots; open/close and the sampled measures exclude nothing beyond the
    cleaning view.
    """
    if not day_eligible(series, session, view=view):
        return None
    times, prices, idx = view_ticks(series, session, view, return_index=True)

    if series.asset_class is AssetClass.STOCK and series.odd_lot is not None:
        oc_prices = prices[~series.odd_lot[idx]]
        if oc_prices.size == 0:
            log.warning("%s %s: every trade is an odd lot, open/close fall back to all ticks",
                        series.symbol, series.date)
            oc_prices = prices
    else:
        oc_prices = prices

    high = float(prices.max())
    low = float(prices.min())
    open_ = float(oc_prices[0])
    close = float(oc_prices[-1])

    volume = trades = None
    if series.asset_class is AssetClass.STOCK:
        sel = series.in_session_mask & (series.times >= session.open_ms) & (series.times <= session.close_ms)
        if series.volumes is not None:
            volume = int(np.maximum(series.volumes[sel], 0).sum())
        if series.trades is not None:
            trades = int(np.maximum(series.trades[sel], 0).sum())

    row = DailyMeasures(
        symbol=series.symbol, date=series.date,
        open=open_, high=high, low=low, close=close,
        volume=volume, trades=trades,
    )

    hi5, lo5 = interval_extremes(times, prices, session, interval_s=300)
    row.pr, row.gkr, row.rr5 = range_measures(high, low, open_, close, hi5, lo5)

    g1 = previous_tick_grid(series, 60, session, view=view)
    if g1 is not None:
        one = return_based_measures(log_returns(g1).returns)
        for name in RETURN_MEASURES:
            setattr(row, f"{name}1", one[name])
    g5 = previous_tick_grid(series, 300, session, view=view)
    if g5 is not None:
        five = return_based_measures(log_returns(g5).returns)
        for name in RETURN_MEASURES:
            setattr(row, f"{name}5", five[name])
    ss = subsampled_measures(series, session, view=view)
    for name in RETURN_MEASURES:
        setattr(row, f"{name}5_ss", ss[name])

    row.rk = realized_kernel(series, session, kernel_cfg, view=view)
    return row
