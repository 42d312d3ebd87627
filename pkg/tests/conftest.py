import datetime as dt

import numpy as np
import pytest

from rvengine.calendars import (
    STOCK_CLOSE_MS,
    STOCK_OPEN_MS,
    AssetClass,
    HolidayCalendar,
    TradingSession,
)


@pytest.fixture
def calendar():
    return HolidayCalendar(
        start=dt.date(2009, 9, 25),
        end=dt.date(2026, 12, 31),
        holidays={
            AssetClass.STOCK: frozenset({dt.date(2024, 11, 28), dt.date(2024, 12, 25)}),
            AssetClass.EXCHANGE_RATE: frozenset({dt.date(2024, 12, 25)}),
            AssetClass.FUTURE: frozenset({dt.date(2024, 12, 25)}),
        },
        early_closes=frozenset({dt.date(2024, 11, 29), dt.date(2024, 12, 24)}),
        odd_lot_overrides={"PENNY": 1000},
    )


@pytest.fixture
def stock_session():
    # Monday 2024-03-11, regular hours
    return TradingSession(dt.date(2024, 3, 11), STOCK_OPEN_MS, STOCK_CLOSE_MS, AssetClass.STOCK)


def make_stock_series(times_ms, prices, volumes=None, date=dt.date(2024, 3, 11), symbol="TEST",
                      session=None):
    """Stock TickSeries with in-session flags resolved against `session`."""
    from rvengine.ticks import _flags_for, TickSeries

    times = np.asarray(times_ms, dtype=np.int64)
    prices = np.asarray(prices, dtype=np.float64)
    if session is None:
        session = TradingSession(date, STOCK_OPEN_MS, STOCK_CLOSE_MS, AssetClass.STOCK)
    if volumes is None:
        volumes = np.full(times.size, 200, dtype=np.int64)
    else:
        volumes = np.asarray(volumes, dtype=np.int64)
    return TickSeries(
        symbol=symbol,
        date=date,
        asset_class=AssetClass.STOCK,
        times=times,
        prices=prices,
        flags=_flags_for(times, session),
        volumes=volumes,
        trades=np.ones(times.size, dtype=np.int64),
    )
