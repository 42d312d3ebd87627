"""Previous-tick sampling onto regular grids, subsample grids, log returns,
and multi-asset synchronization.

Grid convention: points run from the session open to the close in constant
steps, each interval labeled by its right endpoint (a tick exactly on a grid
time belongs to that point). Grid points before the first tick carry the
day's first in-session price backward.
"""

from __future__ import annotations

import datetime as dt
import logging
from dataclasses import dataclass

import numpy as np

from rvengine import _kernels
from rvengine.calendars import MS_PER_SECOND, AssetClass, TradingSession
from rvengine.cleaning import replace_outliers
from rvengine.ticks import FLAG_VALID, TickSeries

log = logging.getLogger(__name__)

# Eligibility floor: days below either bound produce no measures row.
MIN_OBSERVATIONS = 40
MIN_ACTIVITY_SPAN_MS = 2 * 3_600_000


@dataclass
class RegularGrid:
    """Equally spaced prices over one session, previous-tick filled."""

    symbol: str
    date: dt.date
    interval_s: int
    times: np.ndarray  # int64 ms-of-day, constant spacing
    prices: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.prices):
            raise ValueError("times/prices length mismatch")

    @property
    def m(self) -> int:
        """Number of intraday return intervals."""
        return max(len(self.times) - 1, 0)


@dataclass
class ReturnSeries:
    returns: np.ndarray

    @property
    def m(self) -> int:
        return len(self.returns)


@dataclass
class SynchronizedPanel:
    symbols: list[str]
    date: dt.date
    interval_s: int
    times: np.ndarray
    returns: np.ndarray  # m x N

    @property
    def n_assets(self) -> int:
        return self.returns.shape[1] if self.returns.ndim == 2 else 0


def view_ticks(
    series: TickSeries,
    session: TradingSession,
    view: str = "cleaned",
    return_index: bool = False,
):
    """(times, prices) feeding the sampler for one view.

    cleaned: valid records plus replaced outliers (replacement applied here if
    the series still carries unreplaced outlier flags). raw: in-session
    records with the prices as recorded. Quote-driven classes price at the
    mid-quote either way. With return_index, also yields the positions of the
    selected records in the original series.
    """
    if view not in ("cleaned", "raw"):
        raise ValueError(f"unknown view {view!r}")
    if view == "cleaned" and series.asset_class is AssetClass.STOCK:
        series = replace_outliers(series)
    sel = series.in_session_mask & (series.times >= session.open_ms) & (series.times <= session.close_ms)
    prices = series.effective_prices()
    sel &= np.isfinite(prices) & (prices > 0)
    if return_index:
        return series.times[sel], prices[sel], np.flatnonzero(sel)
    return series.times[sel], prices[sel]


def grid_times(session: TradingSession, interval_s: int, offset_s: int = 0) -> np.ndarray:
    """Grid instants anchor..close, anchor = open + offset, step = interval."""
    step = interval_s * MS_PER_SECOND
    anchor = session.open_ms + offset_s * MS_PER_SECOND
    if anchor > session.close_ms:
        return np.empty(0, dtype=np.int64)
    return np.arange(anchor, session.close_ms + 1, step, dtype=np.int64)


def previous_tick_grid(
    series: TickSeries,
    interval_s: int,
    session: TradingSession,
    view: str = "cleaned",
    offset_s: int = 0,
) -> RegularGrid | None:
    """Sample one day onto a regular grid; None when no usable record exists."""
    times, prices = view_ticks(series, session, view)
    if times.size == 0:
        return None
    gtimes = grid_times(session, interval_s, offset_s)
    if gtimes.size == 0:
        return None
    gprices = _kernels.previous_tick_fill(times, prices, gtimes)
    return RegularGrid(series.symbol, series.date, interval_s, gtimes, gprices)


def subsample_grids(
    series: TickSeries,
    session: TradingSession,
    base_s: int = 300,
    shift_s: int = 60,
    count: int = 5,
    view: str = "cleaned",
) -> list[RegularGrid]:
    """Shifted copies of the base grid; grid 0 is the base grid itself."""
    grids = []
    for j in range(count):
        g = previous_tick_grid(series, base_s, session, view=view, offset_s=j * shift_s)
        if g is not None:
            grids.append(g)
    return grids


def log_returns(grid: RegularGrid) -> ReturnSeries:
    """Log returns across the grid; every price must be positive."""
    if np.any(grid.prices <= 0):
        raise ValueError("grid contains non-positive prices")
    return ReturnSeries(np.diff(np.log(grid.prices)))


def activity_span_ms(series: TickSeries, session: TradingSession, view: str = "cleaned") -> int:
    times, _ = view_ticks(series, session, view)
    if times.size == 0:
        return 0
    return int(times[-1] - times[0])


def day_eligible(series: TickSeries, session: TradingSession, view: str = "cleaned") -> bool:
    """Minimum-data rule: >= 40 usable intraday observations and a tick span
    of at least two hours."""
    times, _ = view_ticks(series, session, view)
    if times.size < MIN_OBSERVATIONS:
        return False
    return int(times[-1] - times[0]) >= MIN_ACTIVITY_SPAN_MS


def synchronize(
    days: list[TickSeries],
    sessions: list[TradingSession],
    interval_s: int = 60,
    view: str = "cleaned",
) -> SynchronizedPanel | None:
    """Previous-tick all assets onto one shared grid spanning the session union.

    Assets inactive over a sub-window contribute zero returns there (carried
    prices). Assets with no usable record at all are dropped; if none remain
    the panel is empty (None).
    """
    if len(days) != len(sessions):
        raise ValueError("one session per series required")
    dates = {s.date for s in days}
    if len(dates) > 1:
        raise ValueError(f"series span multiple dates: {sorted(dates)}")

    picked: list[tuple[TickSeries, np.ndarray, np.ndarray]] = []
    open_ms = None
    close_ms = None
    for series, session in zip(days, sessions):
        if session is None:
            continue
        times, prices = view_ticks(series, session, view)
        if times.size == 0:
            continue
        picked.append((series, times, prices))
        open_ms = session.open_ms if open_ms is None else min(open_ms, session.open_ms)
        close_ms = session.close_ms if close_ms is None else max(close_ms, session.close_ms)
    if not picked or open_ms is None:
        return None

    step = interval_s * MS_PER_SECOND
    gtimes = np.arange(open_ms, close_ms + 1, step, dtype=np.int64)
    cols = []
    symbols = []
    for series, times, prices in picked:
        gprices = _kernels.previous_tick_fill(times, prices, gtimes)
        cols.append(np.diff(np.log(gprices)))
        symbols.append(series.symbol)
    returns = np.column_stack(cols) if cols else np.empty((0, 0))
    return SynchronizedPanel(symbols, days[0].date, interval_s, gtimes, returns)
