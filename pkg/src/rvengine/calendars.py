"""Trading sessions and the holiday/early-close calendar.

Session windows per asset class:

* stocks        09:30-16:05 local exchange time, 09:30-13:00 on early-close
                days; weekends and listed holidays yield no session.
* exchange rates  continuous Sun 17:00 through Fri 17:00, stored per calendar
                day: Sun 17:00-24:00, Mon-Thu 00:00-24:00, Fri 00:00-17:00.
* futures       continuous Sun 18:00 through Fri 17:00 with a daily
                maintenance pause that carries no ticks: Sun 18:00-24:00,
                Mon-Thu 00:00-24:00, Fri 00:00-17:00.

The calendar itself is data, not rules: closure schedules are irregular
(observed holidays, ad-hoc early closes), so they live in a versioned TOML
file loaded at run time.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import tomli

from rvengine.errors import CalendarRangeError

MS_PER_SECOND = 1_000
MS_PER_MINUTE = 60_000
MS_PER_HOUR = 3_600_000
MS_PER_DAY = 86_400_000

STOCK_OPEN_MS = 9 * MS_PER_HOUR + 30 * MS_PER_MINUTE
STOCK_CLOSE_MS = 16 * MS_PER_HOUR + 5 * MS_PER_MINUTE
STOCK_EARLY_CLOSE_MS = 13 * MS_PER_HOUR
FX_SUNDAY_OPEN_MS = 17 * MS_PER_HOUR
FUTURES_SUNDAY_OPEN_MS = 18 * MS_PER_HOUR
FRIDAY_CLOSE_MS = 17 * MS_PER_HOUR


class AssetClass(str, Enum):
    STOCK = "stock"
    EXCHANGE_RATE = "exchange_rate"
    FUTURE = "future"


# On-disk directory names, matching the raw data layout.
CLASS_DIRS = {
    AssetClass.STOCK: "stocks",
    AssetClass.EXCHANGE_RATE: "exchange rates",
    AssetClass.FUTURE: "futures",
}
DIR_CLASSES = {v: k for k, v in CLASS_DIRS.items()}


def ms_to_time(ms: int) -> dt.time:
    """Millisecond-of-day to a time object; 24:00 maps to time.max."""
    if ms >= MS_PER_DAY:
        return dt.time.max
    sec, msec = divmod(ms, MS_PER_SECOND)
    minute, s = divmod(sec, 60)
    hour, m = divmod(minute, 60)
    return dt.time(hour, m, s, msec * 1000)


@dataclass(frozen=True)
class TradingSession:
    """One tradable window on one calendar date."""

    date: dt.date
    open_ms: int
    close_ms: int
    asset_class: AssetClass
    early_close: bool = False

    def __post_init__(self):
        if not 0 <= self.open_ms < self.close_ms <= MS_PER_DAY:
            raise ValueError(f"invalid session window [{self.open_ms}, {self.close_ms}]")

    @property
    def open(self) -> dt.time:
        return ms_to_time(self.open_ms)

    @property
    def close(self) -> dt.time:
        return ms_to_time(self.close_ms)

    @property
    def duration_ms(self) -> int:
        return self.close_ms - self.open_ms

    def contains(self, ms: int) -> bool:
        """In-session test; both boundaries included (right-endpoint convention)."""
        return self.open_ms <= ms <= self.close_ms


@dataclass(frozen=True)
class OddLotRule:
    """Trades below `threshold` shares count as odd lots."""

    threshold: int = 100

    def __post_init__(self):
        if self.threshold <= 0:
            raise ValueError("odd-lot threshold must be positive")


@dataclass
class HolidayCalendar:
    """Versioned closure table: holidays per class, stock early closes, odd-lot overrides."""

    start: dt.date
    end: dt.date
    holidays: dict[AssetClass, frozenset[dt.date]] = field(default_factory=dict)
    early_closes: frozenset[dt.date] = frozenset()
    odd_lot_overrides: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_toml(cls, path: str | Path) -> "HolidayCalendar":
        with open(path, "rb") as fh:
            raw = tomli.load(fh)
        return cls._from_dict(raw)

    @classmethod
    def _from_dict(cls, raw: dict) -> "HolidayCalendar":
        sections = {
            AssetClass.STOCK: "stocks",
            AssetClass.EXCHANGE_RATE: "exchange_rates",
            AssetClass.FUTURE: "futures",
        }
        holidays = {}
        for cls_key, section in sections.items():
            days = raw.get(section, {}).get("holidays", [])
            holidays[cls_key] = frozenset(_as_date(d) for d in days)
        early = frozenset(_as_date(d) for d in raw.get("stocks", {}).get("early_close", []))
        overrides = {str(k): int(v) for k, v in raw.get("odd_lot_overrides", {}).items()}
        return cls(
            start=_as_date(raw["start"]),
            end=_as_date(raw["end"]),
            holidays=holidays,
            early_closes=early,
            odd_lot_overrides=overrides,
        )

    def odd_lot_rule(self, symbol: str) -> OddLotRule:
        return OddLotRule(self.odd_lot_overrides.get(symbol, 100))


def _as_date(value) -> dt.date:
    if isinstance(value, dt.date):
        return value
    return dt.date.fromisoformat(str(value))


def default_calendar() -> HolidayCalendar:
    """Calendar bundled with the package (see data/calendar.toml for coverage)."""
    ref = resources.files("rvengine").joinpath("data/calendar.toml")
    with ref.open("rb") as fh:
        return HolidayCalendar._from_dict(tomli.load(fh))


def session_for(
    asset_class: AssetClass,
    date: dt.date,
    calendar: HolidayCalendar,
) -> TradingSession | None:
    """Resolve the trading session for a date, or None on non-trading days."""
    if date < calendar.start:
        raise CalendarRangeError(f"{date} precedes the calendar range starting {calendar.start}")
    if date > calendar.end:
        raise CalendarRangeError(f"{date} is past the calendar range ending {calendar.end}")
    if date in calendar.holidays.get(asset_class, frozenset()):
        return None
    wd = date.weekday()  # Mon=0 .. Sun=6

    if asset_class is AssetClass.STOCK:
        if wd >= 5:
            return None
        early = date in calendar.early_closes
        close = STOCK_EARLY_CLOSE_MS if early else STOCK_CLOSE_MS
        return TradingSession(date, STOCK_OPEN_MS, close, asset_class, early)

    if wd == 5:  # Saturday: no session for the continuous classes either
        return None
    if wd == 6:
        open_ms = FX_SUNDAY_OPEN_MS if asset_class is AssetClass.EXCHANGE_RATE else FUTURES_SUNDAY_OPEN_MS
        return TradingSession(date, open_ms, MS_PER_DAY, asset_class)
    close_ms = FRIDAY_CLOSE_MS if wd == 4 else MS_PER_DAY
    return TradingSession(date, 0, close_ms, asset_class)
