"""Per-day columnar storage in the raw-data directory layout.

Layout: root/{stocks|exchange rates|futures}/SYMBOL/YYYY_MM_DD.parquet, with
an optional adjustments.txt per symbol folder that is preserved verbatim and
never consulted by computation. Writes go through a temp file + rename so
concurrent writers to different symbol-days never observe torn files.
"""

from __future__ import annotations

import datetime as dt
import os
import uuid
from pathlib import Path

import numpy as np
import pyarrow as pa
import pyarrow.parquet as pq

from rvengine.calendars import CLASS_DIRS, DIR_CLASSES, AssetClass
from rvengine.errors import IntegrityError
from rvengine.ticks import TickSeries


def day_path(root: str | Path, asset_class: AssetClass, symbol: str, date: dt.date) -> Path:
    return Path(root) / CLASS_DIRS[asset_class] / symbol / f"{date.strftime('%Y_%m_%d')}.parquet"


def store_day(series: TickSeries, root: str | Path) -> Path:
    """Persist one symbol-day; round-trips all fields and flags losslessly."""
    path = day_path(root, series.asset_class, series.symbol, series.date)
    path.parent.mkdir(parents=True, exist_ok=True)

    data: dict[str, pa.Array] = {
        "time": pa.array(series.times, type=pa.int64()),
        "price": pa.array(series.prices, type=pa.float64()),
        "flag": pa.array(series.flags, type=pa.float64()),
    }
    for name, arr, typ in (
        ("bid", series.bids, pa.float64()),
        ("ask", series.asks, pa.float64()),
        ("volume", series.volumes, pa.int64()),
        ("trades", series.trades, pa.int64()),
        ("odd_lot", series.odd_lot, pa.bool_()),
    ):
        if arr is not None:
            data[name] = pa.array(arr, type=typ)
    table = pa.table(data)
    tmp = path.with_name(f".tmp-{uuid.uuid4().hex}.parquet")
    pq.write_table(table, tmp)
    os.replace(tmp, path)
    return path


def load_day(
    root: str | Path, symbol: str, date: dt.date, asset_class: AssetClass
) -> TickSeries | None:
    """Load one symbol-day; None signals an absent day (holiday, never stored)."""
    path = day_path(root, asset_class, symbol, date)
    if not path.exists():
        return None
    try:
        table = pq.read_table(path)
        cols = {name: table.column(name).to_numpy(zero_copy_only=False) for name in table.column_names}
        return TickSeries(
            symbol=symbol,
            date=date,
            asset_class=asset_class,
            times=cols["time"].astype(np.int64),
            prices=cols["price"].astype(np.float64),
            flags=cols["flag"].astype(np.float64),
            bids=cols.get("bid"),
            asks=cols.get("ask"),
            volumes=cols["volume"].astype(np.int64) if "volume" in cols else None,
            trades=cols["trades"].astype(np.int64) if "trades" in cols else None,
            odd_lot=cols["odd_lot"].astype(bool) if "odd_lot" in cols else None,
        )
    except (pa.ArrowInvalid, OSError, KeyError) as exc:
        raise IntegrityError(f"cannot read {path}: {exc}") from exc


def list_symbols(root: str | Path, asset_class: AssetClass) -> list[str]:
    base = Path(root) / CLASS_DIRS[asset_class]
    if not base.is_dir():
        return []
    return sorted(p.name for p in base.iterdir() if p.is_dir())


def list_days(root: str | Path, asset_class: AssetClass, symbol: str) -> list[dt.date]:
    base = Path(root) / CLASS_DIRS[asset_class] / symbol
    if not base.is_dir():
        return []
    days = []
    for p in base.glob("*.parquet"):
        try:
            days.append(dt.datetime.strptime(p.stem, "%Y_%m_%d").date())
        except ValueError:
            continue
    return sorted(days)


def classes_present(root: str | Path) -> list[AssetClass]:
    base = Path(root)
    return [DIR_CLASSES[p.name] for p in sorted(base.iterdir()) if p.is_dir() and p.name in DIR_CLASSES]
