"""HTTP service backing the dashboard: catalogue, measure series, summary
stats, on-demand estimation with forecasting, and bulk download archives.

Handlers are stateless per request and read immutable store snapshots, so
concurrent estimation requests cannot interfere. Errors are structured
(code + message), never opaque tracebacks.
"""

from __future__ import annotations

import datetime as dt
import io
import zipfile
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel

from rvengine import assets
from rvengine.calendars import AssetClass
from rvengine.covariance import COVARIANCE_MEASURES
from rvengine.errors import EstimationError
from rvengine.measures import MEASURE_COLUMNS
from rvengine.measurestore import MeasureStore
from rvengine.models import annualize
from rvengine.models.forecast import MAX_HORIZON
from rvengine.pipeline import MODEL_FAMILIES, close_to_close_signs, estimate_and_forecast

_CLASS_KEYS = {
    AssetClass.STOCK: "stocks",
    AssetClass.EXCHANGE_RATE: "exchange_rates",
    AssetClass.FUTURE: "futures",
}
_KEY_CLASSES = {v: k for k, v in _CLASS_KEYS.items()}

VALID_SERIES_NAMES = set(MEASURE_COLUMNS) | set(COVARIANCE_MEASURES)


class EstimateRequest(BaseModel):
    symbol: str
    measure: str = "rv5"
    family: str = "har"
    date_from: dt.date | None = None
    date_to: dt.date | None = None

    model_config = {"populate_by_name": True}

    def __init__(self, **data):
        # accept the wire names "from"/"to"
        if "from" in data:
            data["date_from"] = data.pop("from")
        if "to" in data:
            data["date_to"] = data.pop("to")
        super().__init__(**data)


def _shift_months(day: dt.date, months: int) -> dt.date:
    month = day.month - 1 + months
    year = day.year + month // 12
    month = month % 12 + 1
    last = [31, 29 if year % 4 == 0 and (year % 100 != 0 or year % 400 == 0) else 28,
            31, 30, 31, 30, 31, 31, 30, 31, 30, 31][month - 1]
    return dt.date(year, month, min(day.day, last))


def default_window(today: dt.date | None = None) -> tuple[dt.date, dt.date]:
    """Window applied when from/to are omitted: one year ending one month back."""
    today = today or dt.date.today()
    return _shift_months(today, -13), _shift_months(today, -1)


def _annualized_or_none(v: float) -> float | None:
    if not np.isfinite(v):
        return None
    return float(annualize(max(v, 0.0)))


def create_app(measures_root, estimate_timeout_s: float = 60.0, min_obs: int = 750) -> FastAPI:
    app = FastAPI(title="realized measures service")
    store = MeasureStore(measures_root)
    executor = ThreadPoolExecutor(max_workers=8)

    @app.get("/assets")
    def catalogue():
        out = {}
        for cls, key in _CLASS_KEYS.items():
            entries = []
            for symbol in store.symbols(cls):
                entry = assets.describe(cls, symbol)
                rows = store.frame(cls)
                have = rows[rows["symbol"] == symbol]["date"]
                entry["first_stored"] = have.min().isoformat() if len(have) else None
                entry["last_stored"] = have.max().isoformat() if len(have) else None
                entries.append(entry)
            out[key] = entries
        return out

    @app.get("/assets/{asset_class}")
    def catalogue_class(asset_class: str):
        if asset_class not in _KEY_CLASSES:
            raise HTTPException(404, f"unknown asset class {asset_class!r}")
        return catalogue()[asset_class]

    def _window(date_from, date_to):
        if date_from is None and date_to is None:
            return default_window()
        if date_from is not None and date_to is not None and date_from > date_to:
            raise HTTPException(400, "'from' is after 'to'")
        return date_from, date_to

    @app.get("/measures/{symbol}")
    def measure_series(
        symbol: str,
        date_from: dt.date | None = Query(None, alias="from"),
        date_to: dt.date | None = Query(None, alias="to"),
        names: str = Query("rv5"),
    ):
        if store.find_class(symbol) is None:
            raise HTTPException(404, f"unknown symbol {symbol!r}")
        wanted = [n.strip() for n in names.split(",") if n.strip()]
        bad = [n for n in wanted if n not in set(MEASURE_COLUMNS)]
        if bad:
            raise HTTPException(
                400, f"unknown measures {bad}; valid names: {', '.join(MEASURE_COLUMNS)}")
        date_from, date_to = _window(date_from, date_to)
        rows = store.series(symbol, date_from, date_to)
        payload = []
        for _, row in rows.iterrows():
            values = {}
            annualized = {}
            for name in wanted:
                v = float(row[name])
                if not np.isfinite(v):
                    continue  # absent measures are omitted, not null-padded
                values[name] = v
                annualized[name] = _annualized_or_none(v)
            payload.append({"date": row["date"].isoformat(), "values": values,
                            "annualized": annualized})
        return {"symbol": symbol, "rows": payload}

    @app.get("/summary/{symbol}")
    def summary(
        symbol: str,
        date_from: dt.date | None = Query(None, alias="from"),
        date_to: dt.date | None = Query(None, alias="to"),
        measure: str = Query("rv5"),
    ):
        cls = store.find_class(symbol)
        if cls is None:
            raise HTTPException(404, f"unknown symbol {symbol!r}")
        if measure not in MEASURE_COLUMNS:
            raise HTTPException(400, f"unknown measure {measure!r}")
        date_from, date_to = _window(date_from, date_to)
        rows = store.series(symbol, date_from, date_to)
        rows = rows[np.isfinite(rows[measure].to_numpy(dtype=float))]
        if not len(rows):
            return {"avg_vol": None, "vol_of_vol": None, "avg_return": None, "avg_volume": None}
        ann = annualize(np.maximum(rows[measure].to_numpy(dtype=float), 0.0))
        closes = rows["C"].to_numpy(dtype=float)
        avg_ret = float(np.mean(np.log(closes[1:] / closes[:-1]))) if len(closes) > 1 else 0.0
        avg_volume = None
        if cls is AssetClass.STOCK and rows["VOL"].notna().any():
            avg_volume = float(rows["VOL"].astype(float).mean())
        return {
            "avg_vol": float(ann.mean()),
            "vol_of_vol": float(ann.std(ddof=0)),
            "avg_return": avg_ret,
            "avg_volume": avg_volume,
        }

    @app.post("/models/estimate")
    def estimate(req: EstimateRequest):
        if store.find_class(req.symbol) is None:
            raise HTTPException(404, f"unknown symbol {req.symbol!r}")
        if req.measure not in MEASURE_COLUMNS:
            raise HTTPException(400, f"unknown measure {req.measure!r}")
        if req.family not in MODEL_FAMILIES:
            raise HTTPException(400, f"unknown family {req.family!r}; choose from {MODEL_FAMILIES}")
        date_from, date_to = _window(req.date_from, req.date_to)
        window_rows = store.series(req.symbol, date_from, date_to)
        usable = int(np.isfinite(window_rows[req.measure].to_numpy(dtype=float)).sum()) \
            if len(window_rows) else 0
        if usable < min_obs:
            raise HTTPException(
                422, f"estimation needs at least {min_obs} observations of {req.measure}; "
                     f"the window holds {usable}")
        later_rows = store.rows_after(req.symbol, window_rows["date"].max(), MAX_HORIZON)

        future = executor.submit(
            estimate_and_forecast, window_rows, later_rows, req.measure, req.family, min_obs)
        try:
            fit, fc, notice = future.result(timeout=estimate_timeout_s)
        except FutureTimeout:
            raise HTTPException(504, f"estimation exceeded {estimate_timeout_s:.0f}s")
        except EstimationError as exc:
            raise HTTPException(422, str(exc))

        dates = window_rows[np.isfinite(window_rows[req.measure].to_numpy(dtype=float))]["date"]
        dates = [d.isoformat() for d in dates]
        fitted_dates = dates[22:] if fit.family in ("har", "harq") else dates
        if fit.scale == "daily_variance":
            ann_fitted = [_annualized_or_none(v) for v in fit.fitted]
        else:
            ann_fitted = [float(v) for v in fit.fitted]

        body = {
            "fit": fit.to_report() | {"fitted_dates": fitted_dates, "annualized_fitted": ann_fitted},
            "forecast": None,
            "notice": notice,
        }
        if fc is not None:
            later_dates = [d.isoformat() for d in later_rows["date"].tolist()[: fc.horizon]]
            if fit.scale == "daily_variance":
                ann = {
                    "point": [_annualized_or_none(v) for v in fc.point],
                    "ci_low": [_annualized_or_none(v) for v in fc.ci_low],
                    "ci_high": [_annualized_or_none(v) for v in fc.ci_high],
                }
            else:
                ann = {
                    "point": fc.point.tolist(),
                    "ci_low": fc.ci_low.tolist(),
                    "ci_high": fc.ci_high.tolist(),
                }
            body["forecast"] = fc.to_dict() | {"dates": later_dates, "annualized": ann}
        return body

    @app.get("/download/{asset_class}/{kind}")
    def download(asset_class: str, kind: str):
        from fastapi import Response

        data = build_archive(store, asset_class, kind)
        return Response(
            content=data, media_type="application/zip",
            headers={"Content-Disposition": f"attachment; filename={asset_class}_{kind}.zip"})

    @app.post("/refresh")
    def refresh():
        store.refresh()
        return {"status": "reloaded"}

    return app


def build_archive(store: MeasureStore, asset_class: str, kind: str) -> bytes:
    """Zip of CSV files plus a generated README; raises HTTPException on
    unknown routes or an empty store."""
    if asset_class not in _KEY_CLASSES:
        raise HTTPException(404, f"unknown asset class {asset_class!r}")
    if kind not in ("variance", "covariance"):
        raise HTTPException(404, f"unknown data type {kind!r}; use variance or covariance")
    cls = _KEY_CLASSES[asset_class]
    buf = io.BytesIO()
    if kind == "variance":
        frame = store.frame(cls)
        if not len(frame):
            raise HTTPException(404, f"no {asset_class} variance data stored")
        n_records = 0
        with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
            for symbol in sorted(frame["symbol"].unique()):
                sub = frame[frame["symbol"] == symbol].sort_values("date")
                zf.writestr(f"{symbol}.csv", sub.to_csv(index=False))
                n_records += len(sub)
            readme = _readme(
                asset_class, kind, frame["date"].min(), frame["date"].max(),
                n_records, sorted(frame["symbol"].unique()), list(MEASURE_COLUMNS))
            zf.writestr("README.txt", readme)
    else:
        if not store.has_covariances(cls):
            raise HTTPException(404, f"no {asset_class} covariance data stored")
        frame = store.covariance_frame(cls)
        n_records = 0
        with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
            for measure in COVARIANCE_MEASURES:
                sub = frame[frame["measure"] == measure]
                zf.writestr(f"{measure}.csv", sub.to_csv(index=False))
                n_records += len(sub)
            readme = _readme(
                asset_class, kind, frame["date"].min(), frame["date"].max(),
                n_records, sorted(set(frame["asset_i"])), list(COVARIANCE_MEASURES))
            zf.writestr("README.txt", readme)
    return buf.getvalue()


def _readme(asset_class, kind, first, last, n_records, symbols, measures) -> str:
    lines = [
        f"Asset type: {asset_class}",
        f"Data type: {kind}",
        f"Date range: {first} to {last}",
        f"Records: {n_records}",
        f"Assets ({len(symbols)}): {', '.join(symbols)}",
        f"Measures ({len(measures)}): {', '.join(measures)}",
        "",
        "One CSV per symbol (variance) or per measure (covariance).",
        "Variance columns are daily variance units; annualized volatility is"
        " sqrt(252 x variance) x 100.",
    ]
    return "\n".join(lines)
