"""Columnar store of computed measure rows and covariance matrices.

One parquet file per asset class for the daily rows plus per-day long-format
covariance files, all swapped atomically so readers only ever see complete
snapshots. The in-memory snapshot is keyed (symbol, date) and reloaded on
demand.
"""

from __future__ import annotations

import datetime as dt
import os
import uuid
from pathlib import Path

import numpy as np
import pandas as pd

from rvengine.calendars import CLASS_DIRS, AssetClass
from rvengine.covariance import COVARIANCE_MEASURES, CovarianceSet
from rvengine.measures import MEASURE_COLUMNS, DailyMeasures

DAILY_FIELDS = ("O", "H", "L", "C", "VOL", "N")
ROW_COLUMNS = ("symbol", "date", *DAILY_FIELDS, *MEASURE_COLUMNS)

_FIELD_MAP = {"O": "open", "H": "high", "L": "low", "C": "close", "VOL": "volume", "N": "trades"}


def row_record(row: DailyMeasures) -> dict:
    rec = {"symbol": row.symbol, "date": row.date}
    for col, attr in _FIELD_MAP.items():
        rec[col] = getattr(row, attr)
    for col in MEASURE_COLUMNS:
        rec[col] = getattr(row, col)
    return rec


class MeasureStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._frames: dict[AssetClass, pd.DataFrame] = {}

    def _measures_path(self, asset_class: AssetClass) -> Path:
        return self.root / "measures" / f"{CLASS_DIRS[asset_class]}.parquet"

    def _cov_dir(self, asset_class: AssetClass) -> Path:
        return self.root / "covariances" / CLASS_DIRS[asset_class]

    def refresh(self) -> None:
        self._frames.clear()

    def frame(self, asset_class: AssetClass) -> pd.DataFrame:
        """Current snapshot for one class; empty frame when nothing stored."""
        if asset_class not in self._frames:
            path = self._measures_path(asset_class)
            if path.exists():
                df = pd.read_parquet(path)
                df["date"] = pd.to_datetime(df["date"]).dt.date
                df = df.sort_values(["symbol", "date"]).reset_index(drop=True)
            else:
                df = pd.DataFrame(columns=list(ROW_COLUMNS))
            self._frames[asset_class] = df
        return self._frames[asset_class]

    def upsert_rows(self, asset_class: AssetClass, rows: list[DailyMeasures]) -> int:
        """Insert or replace (symbol, date) rows; swaps the snapshot atomically."""
        if not rows:
            return 0
        new = pd.DataFrame([row_record(r) for r in rows])
        old = self.frame(asset_class)
        if len(old):
            keys = set(zip(new["symbol"], new["date"]))
            keep = ~old.apply(lambda r: (r["symbol"], r["date"]) in keys, axis=1)
            merged = pd.concat([old[keep], new], ignore_index=True)
        else:
            merged = new
        merged = merged.sort_values(["symbol", "date"]).reset_index(drop=True)
        path = self._measures_path(asset_class)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(f".tmp-{uuid.uuid4().hex}.parquet")
        merged.to_parquet(tmp, index=False)
        os.replace(tmp, path)
        self._frames[asset_class] = merged
        return len(new)

    def classes(self) -> list[AssetClass]:
        return [c for c in AssetClass if len(self.frame(c))]

    def symbols(self, asset_class: AssetClass) -> list[str]:
        df = self.frame(asset_class)
        return sorted(df["symbol"].unique()) if len(df) else []

    def find_class(self, symbol: str) -> AssetClass | None:
        for c in AssetClass:
            if symbol in set(self.frame(c)["symbol"].unique()):
                return c
        return None

    def series(
        self,
        symbol: str,
        date_from: dt.date | None = None,
        date_to: dt.date | None = None,
    ) -> pd.DataFrame:
        """All stored rows for a symbol within the window, date-sorted."""
        cls = self.find_class(symbol)
        if cls is None:
            return pd.DataFrame(columns=list(ROW_COLUMNS))
        df = self.frame(cls)
        sel = df[df["symbol"] == symbol]
        if date_from is not None:
            sel = sel[sel["date"] >= date_from]
        if date_to is not None:
            sel = sel[sel["date"] <= date_to]
        return sel.sort_values("date").reset_index(drop=True)

    def rows_after(self, symbol: str, date_to: dt.date, limit: int) -> pd.DataFrame:
        cls = self.find_class(symbol)
        if cls is None:
            return pd.DataFrame(columns=list(ROW_COLUMNS))
        df = self.frame(cls)
        sel = df[(df["symbol"] == symbol) & (df["date"] > date_to)]
        return sel.sort_values("date").head(limit).reset_index(drop=True)

    def upsert_covariances(self, asset_class: AssetClass, sets: list[CovarianceSet]) -> int:
        folder = self._cov_dir(asset_class)
        folder.mkdir(parents=True, exist_ok=True)
        for cs in sets:
            df = pd.DataFrame(cs.to_long_records())
            path = folder / f"{cs.date.strftime('%Y_%m_%d')}.parquet"
            tmp = path.with_name(f".tmp-{uuid.uuid4().hex}.parquet")
            df.to_parquet(tmp, index=False)
            os.replace(tmp, path)
        return len(sets)

    def covariance_frame(self, asset_class: AssetClass) -> pd.DataFrame:
        folder = self._cov_dir(asset_class)
        if not folder.is_dir():
            return pd.DataFrame(columns=["date", "asset_i", "asset_j", "measure", "value"])
        parts = [pd.read_parquet(p) for p in sorted(folder.glob("*.parquet"))]
        if not parts:
            return pd.DataFrame(columns=["date", "asset_i", "asset_j", "measure", "value"])
        df = pd.concat(parts, ignore_index=True)
        df["date"] = pd.to_datetime(df["date"]).dt.date
        return df

    def has_covariances(self, asset_class: AssetClass) -> bool:
        folder = self._cov_dir(asset_class)
        return folder.is_dir() and any(folder.glob("*.parquet"))
