"""Tick-level containers, file parsing, same-timestamp aggregation, odd-lot flags.

A TickSeries holds one symbol-day as parallel NumPy arrays. Record status
lives in `flags` using the storage convention carried through to disk:
1.0 = valid, 0.0 = outside regular hours, NaN = detected outlier.
"""

from __future__ import annotations

import datetime as dt
import logging
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from rvengine.calendars import (
    MS_PER_SECOND,
    AssetClass,
    HolidayCalendar,
    OddLotRule,
    TradingSession,
    default_calendar,
    session_for,
)
from rvengine.errors import ParseError

log = logging.getLogger(__name__)

FLAG_VALID = 1.0
FLAG_OFF_HOURS = 0.0

VOLUME_ABSENT = -1

# Delimited-file column orders (headerless), per asset class.
STOCK_COLUMNS = ("time", "price", "volume", "trades")
QUOTE_COLUMNS = ("time", "price", "bid", "ask", "volume", "trades")


@dataclass
class TickSeries:
    """One symbol-day of trades or quotes, ordered by time-of-day (ms)."""

    symbol: str
    date: dt.date
    asset_class: AssetClass
    times: np.ndarray  # int64 ms since midnight
    prices: np.ndarray  # float64, positive
    flags: np.ndarray  # float64: FLAG_VALID / FLAG_OFF_HOURS / NaN
    bids: np.ndarray | None = None
    asks: np.ndarray | None = None
    volumes: np.ndarray | None = None  # int64, VOLUME_ABSENT when missing
    trades: np.ndarray | None = None  # int64, VOLUME_ABSENT when missing
    odd_lot: np.ndarray | None = None  # bool

    def __post_init__(self):
        n = len(self.times)
        for name in ("prices", "flags", "bids", "asks", "volumes", "trades", "odd_lot"):
            arr = getattr(self, name)
            if arr is not None and len(arr) != n:
                raise ValueError(f"{name} length {len(arr)} != times length {n}")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def valid_mask(self) -> np.ndarray:
        return self.flags == FLAG_VALID

    @property
    def outlier_mask(self) -> np.ndarray:
        return np.isnan(self.flags)

    @property
    def in_session_mask(self) -> np.ndarray:
        """Valid or outlier records; excludes only off-hours ones."""
        return self.flags != FLAG_OFF_HOURS

    def effective_prices(self) -> np.ndarray:
        """Prices the sampler consumes: mid-quotes for quote-driven classes."""
        if self.asset_class is AssetClass.STOCK or self.bids is None or self.asks is None:
            return self.prices
        mid = (self.bids + self.asks) / 2.0
        return np.where(np.isnan(mid), self.prices, mid)


def _parse_time_ms(text: str) -> int:
    hh, mm, rest = text.split(":")
    if "." in rest:
        ss, frac = rest.split(".")
        ms = int(round(float("0." + frac) * 1000))
    else:
        ss, ms = rest, 0
    return (int(hh) * 3600 + int(mm) * 60 + int(ss)) * MS_PER_SECOND + ms


def _flags_for(times: np.ndarray, session: TradingSession | None) -> np.ndarray:
    if session is None:
        return np.full(len(times), FLAG_OFF_HOURS)
    flags = np.where(
        (times >= session.open_ms) & (times <= session.close_ms), FLAG_VALID, FLAG_OFF_HOURS
    )
    return flags.astype(np.float64)


def infer_symbol_date(path: Path) -> tuple[str, dt.date]:
    """Symbol from the parent folder, date from a YYYY_MM_DD file name."""
    symbol = path.parent.name or path.stem
    try:
        date = dt.datetime.strptime(path.stem, "%Y_%m_%d").date()
    except ValueError as exc:
        raise ParseError(f"cannot infer date from file name {path.name!r}") from exc
    return symbol, date


def parse_tick_file(
    path: str | Path,
    asset_class: AssetClass,
    symbol: str | None = None,
    date: dt.date | None = None,
    session: TradingSession | None = None,
    calendar: HolidayCalendar | None = None,
) -> TickSeries:
    """Read one raw symbol-day. Duplicated timestamps are kept for aggregation.

    Delimited files are headerless with the documented per-class column order;
    parquet files carry named columns. Flags are initialised from the resolved
    trading session. An empty file yields an empty series, not an error.
    """
    path = Path(path)
    if symbol is None or date is None:
        isym, idate = infer_symbol_date(path)
        symbol = symbol or isym
        date = date or idate
    if session is None:
        session = session_for(asset_class, date, calendar or default_calendar())

    if path.suffix == ".parquet":
        cols = _read_parquet_columns(path)
    else:
        cols = _read_delimited(path, asset_class)

    times = cols["time"]
    order = np.argsort(times, kind="stable")
    out = {k: v[order] for k, v in cols.items()}
    flags = _flags_for(out["time"], session)
    return TickSeries(
        symbol=symbol,
        date=date,
        asset_class=asset_class,
        times=out["time"],
        prices=out["price"],
        flags=flags,
        bids=out.get("bid"),
        asks=out.get("ask"),
        volumes=out.get("volume"),
        trades=out.get("trades"),
    )


def _read_delimited(path: Path, asset_class: AssetClass) -> dict[str, np.ndarray]:
    names = STOCK_COLUMNS if asset_class is AssetClass.STOCK else QUOTE_COLUMNS
    rows: list[tuple] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) < len(names):
                raise ParseError(f"expected {len(names)} fields, got {len(parts)}", line=lineno)
            try:
                t = _parse_time_ms(parts[0])
                price = float(parts[1])
                if asset_class is AssetClass.STOCK:
                    vol = int(parts[2]) if parts[2] != "" else VOLUME_ABSENT
                    trd = int(parts[3]) if parts[3] != "" else VOLUME_ABSENT
                    row = (t, price, vol, trd)
                else:
                    bid = float(parts[2]) if parts[2] != "" else np.nan
                    ask = float(parts[3]) if parts[3] != "" else np.nan
                    vol = int(parts[4]) if len(parts) > 4 and parts[4] != "" else VOLUME_ABSENT
                    trd = int(parts[5]) if len(parts) > 5 and parts[5] != "" else VOLUME_ABSENT
                    row = (t, price, bid, ask, vol, trd)
            except (ValueError, IndexError) as exc:
                raise ParseError(f"malformed row: {exc}", line=lineno) from exc
            if price <= 0:
                raise ParseError(f"non-positive price {price}", line=lineno)
            rows.append(row)

    if asset_class is AssetClass.STOCK:
        cols = {
            "time": np.array([r[0] for r in rows], dtype=np.int64),
            "price": np.array([r[1] for r in rows], dtype=np.float64),
            "volume": np.array([r[2] for r in rows], dtype=np.int64),
            "trades": np.array([r[3] for r in rows], dtype=np.int64),
        }
    else:
        cols = {
            "time": np.array([r[0] for r in rows], dtype=np.int64),
            "price": np.array([r[1] for r in rows], dtype=np.float64),
            "bid": np.array([r[2] for r in rows], dtype=np.float64),
            "ask": np.array([r[3] for r in rows], dtype=np.float64),
            "volume": np.array([r[4] for r in rows], dtype=np.int64),
            "trades": np.array([r[5] for r in rows], dtype=np.int64),
        }
    return cols


def _read_parquet_columns(path: Path) -> dict[str, np.ndarray]:
    import pyarrow.parquet as pq

    table = pq.read_table(path)
    out: dict[str, np.ndarray] = {}
    for name in table.column_names:
        arr = table.column(name).to_numpy(zero_copy_only=False)
        if name == "time" and arr.dtype.kind in "UO":
            arr = np.array([_parse_time_ms(str(v)) for v in arr], dtype=np.int64)
        out[name] = arr
    if "time" not in out or "price" not in out:
        raise ParseError(f"parquet file {path.name!r} lacks time/price columns")
    out["time"] = out["time"].astype(np.int64)
    out["price"] = out["price"].astype(np.float64)
    for name in ("bid", "ask"):
        if name in out:
            out[name] = out[name].astype(np.float64)
    for name in ("volume", "trades"):
        if name in out:
            out[name] = out[name].astype(np.int64)
    return out


def aggregate_same_timestamp(series: TickSeries) -> TickSeries:
    """Collapse records sharing a timestamp; output times strictly increase.

    Stocks take the volume-weighted average price (falling back to the plain
    mean when the collapsed volume is zero), total volume, and the trade
    count. Quote-driven classes take per-field medians of price, bid and ask;
    their volume/trade fields are dropped from the output.
    """
    n = len(series)
    if n == 0:
        return series
    times, starts = np.unique(series.times, return_index=True)
    if len(times) == n:  # already unique: aggregation is idempotent
        if series.asset_class is AssetClass.STOCK:
            trades = series.trades
            if trades is not None:
                trades = np.where(trades == VOLUME_ABSENT, 1, trades)
            volumes = np.maximum(series.volumes, 0) if series.volumes is not None else None
            return replace(series, volumes=volumes, trades=trades)
        return replace(series, volumes=None, trades=None)
    bounds = np.append(starts, n)

    prices = np.empty(len(times))
    flags = series.flags[starts]
    if series.asset_class is AssetClass.STOCK:
        volumes = np.empty(len(times), dtype=np.int64)
        trades = np.empty(len(times), dtype=np.int64)
        for g in range(len(times)):
            lo, hi = bounds[g], bounds[g + 1]
            p = series.prices[lo:hi]
            v = series.volumes[lo:hi] if series.volumes is not None else None
            vv = np.maximum(v, 0) if v is not None else np.zeros(hi - lo, dtype=np.int64)
            total = int(vv.sum())
            if total > 0:
                prices[g] = float(np.dot(p, vv)) / total
            else:
                prices[g] = float(p.mean())
                if hi - lo > 1:
                    log.info(
                        "%s %s: zero total volume at %d ms, using unweighted mean price",
                        series.symbol, series.date, int(times[g]),
                    )
            volumes[g] = total
            t = series.trades[lo:hi] if series.trades is not None else None
            trades[g] = int(np.where(t == VOLUME_ABSENT, 1, t).sum()) if t is not None else hi - lo
        return replace(
            series, times=times, prices=prices, flags=flags,
            volumes=volumes, trades=trades, bids=None, asks=None, odd_lot=None,
        )

    bids = np.empty(len(times)) if series.bids is not None else None
    asks = np.empty(len(times)) if series.asks is not None else None
    for g in range(len(times)):
        lo, hi = bounds[g], bounds[g + 1]
        prices[g] = float(np.median(series.prices[lo:hi]))
        if bids is not None:
            bids[g] = float(np.median(series.bids[lo:hi]))
        if asks is not None:
            asks[g] = float(np.median(series.asks[lo:hi]))
    return replace(
        series, times=times, prices=prices, flags=flags,
        bids=bids, asks=asks, volumes=None, trades=None, odd_lot=None,
    )


def flag_odd_lots(series: TickSeries, rule: OddLotRule | None = None) -> TickSeries:
    """Annotate stock records with odd_lot = volume < threshold. Never deletes."""
    if series.asset_class is not AssetClass.STOCK:
        raise ValueError("odd-lot flagging applies to stocks only")
    rule = rule or OddLotRule()
    if series.volumes is None:
        log.warning("%s %s: no volumes, treating all records as round lots", series.symbol, series.date)
        odd = np.zeros(len(series), dtype=bool)
    else:
        missing = series.volumes == VOLUME_ABSENT
        if missing.any():
            log.warning(
                "%s %s: %d records without volume treated as round lots",
                series.symbol, series.date, int(missing.sum()),
            )
        odd = (series.volumes >= 0) & (series.volumes < rule.threshold)
    return replace(series, odd_lot=odd)
