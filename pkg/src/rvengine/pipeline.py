"""Batch workflows tying the stages together: ingest raw files, clean stored
days, compute measure rows and covariance sets, and prepare model estimation
inputs. Symbol-days are independent units, so the batch loops parallelize
over them with no shared mutable state.
"""

from __future__ import annotations

import datetime as dt
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd

from rvengine.calendars import CLASS_DIRS, DIR_CLASSES, AssetClass, HolidayCalendar, session_for
from rvengine.cleaning import CleaningParams, CleaningReport, detect_outliers
from rvengine.covariance import covariance_set
from rvengine.errors import EstimationError, ForecastError
from rvengine.kernel import KernelConfig
from rvengine.measures import daily_row
from rvengine.measurestore import MeasureStore
from rvengine.models import annualize, fit_har, fit_mem, forecast
from rvengine.models.base import HAR_FAMILIES, MEM_FAMILIES
from rvengine.models.forecast import MIN_HORIZON
from rvengine.sampling import synchronize
from rvengine.store import list_days, list_symbols, load_day, store_day
from rvengine.ticks import aggregate_same_timestamp, flag_odd_lots, parse_tick_file

log = logging.getLogger(__name__)

MODEL_FAMILIES = HAR_FAMILIES + MEM_FAMILIES


def _dates_in(root: Path, asset_class: AssetClass, symbol: str,
              date_from: dt.date | None, date_to: dt.date | None) -> list[dt.date]:
    days = list_days(root, asset_class, symbol)
    return [d for d in days if (date_from is None or d >= date_from) and (date_to is None or d <= date_to)]


def ingest_tree(
    raw_root: str | Path,
    store_root: str | Path,
    calendar: HolidayCalendar,
    workers: int = 4,
) -> int:
    """Parse, aggregate, odd-lot-flag, and store every raw symbol-day found."""
    raw_root = Path(raw_root)
    store_root = Path(store_root)
    jobs = []
    for class_dir in sorted(raw_root.iterdir()) if raw_root.is_dir() else []:
        if class_dir.name not in DIR_CLASSES:
            continue
        asset_class = DIR_CLASSES[class_dir.name]
        for sym_dir in sorted(p for p in class_dir.iterdir() if p.is_dir()):
            adjustments = sym_dir / "adjustments.txt"
            if adjustments.exists():
                # housekeeping file: carried along verbatim, never computed on
                dest = store_root / class_dir.name / sym_dir.name / "adjustments.txt"
                dest.parent.mkdir(parents=True, exist_ok=True)
                dest.write_bytes(adjustments.read_bytes())
            for f in sorted(sym_dir.glob("*")):
                if f.suffix in (".csv", ".txt", ".parquet") and f.name != "adjustments.txt":
                    jobs.append((f, asset_class, sym_dir.name))

    def _one(job):
        path, asset_class, symbol = job
        series = parse_tick_file(path, asset_class, symbol=symbol, calendar=calendar)
        series = aggregate_same_timestamp(series)
        if asset_class is AssetClass.STOCK:
            series = flag_odd_lots(series, calendar.odd_lot_rule(symbol))
        store_day(series, store_root)
        return 1

    with ThreadPoolExecutor(max_workers=workers) as pool:
        done = sum(pool.map(_one, jobs))
    log.info("ingested %d symbol-days from %s", done, raw_root)
    return done


def clean_stored_days(
    store_root: str | Path,
    symbols: list[str],
    date_from: dt.date | None,
    date_to: dt.date | None,
    params: CleaningParams,
    workers: int = 4,
) -> list[CleaningReport]:
    """Run outlier detection over stored stock days, persisting the flags."""

    def _one(job):
        symbol, day = job
        series = load_day(store_root, symbol, day, AssetClass.STOCK)
        if series is None:
            return None
        flagged, report = detect_outliers(series, params)
        store_day(flagged, store_root)
        return report

    jobs = [
        (symbol, day)
        for symbol in symbols
        for day in _dates_in(Path(store_root), AssetClass.STOCK, symbol, date_from, date_to)
    ]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return [r for r in pool.map(_one, jobs) if r is not None]


def compute_measure_rows(
    store_root: str | Path,
    measures_root: str | Path,
    asset_class: AssetClass,
    calendar: HolidayCalendar,
    symbols: list[str] | None = None,
    date_from: dt.date | None = None,
    date_to: dt.date | None = None,
    kernel_cfg: KernelConfig = KernelConfig(),
    view: str = "cleaned",
    workers: int = 4,
) -> int:
    """Daily measure rows for every eligible stored day, upserted per class."""
    store_root = Path(store_root)
    symbols = symbols or list_symbols(store_root, asset_class)

    def _one(job):
        symbol, day = job
        session = session_for(asset_class, day, calendar)
        if session is None:
            return None
        series = load_day(store_root, symbol, day, asset_class)
        if series is None:
            return None
        return daily_row(series, session, kernel_cfg, view=view)

    jobs = [
        (symbol, day)
        for symbol in symbols
        for day in _dates_in(store_root, asset_class, symbol, date_from, date_to)
    ]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = [r for r in pool.map(_one, jobs) if r is not None]
    store = MeasureStore(measures_root)
    return store.upsert_rows(asset_class, rows)


def compute_covariance_sets(
    store_root: str | Path,
    measures_root: str | Path,
    asset_class: AssetClass,
    calendar: HolidayCalendar,
    date_from: dt.date | None = None,
    date_to: dt.date | None = None,
    view: str = "cleaned",
) -> int:
    """Per-day covariance matrices over all symbols of one class."""
    store_root = Path(store_root)
    symbols = list_symbols(store_root, asset_class)
    all_days = sorted({
        d for s in symbols for d in _dates_in(store_root, asset_class, s, date_from, date_to)
    })
    sets = []
    for day in all_days:
        session = session_for(asset_class, day, calendar)
        if session is None:
            continue
        series = [load_day(store_root, s, day, asset_class) for s in symbols]
        series = [s for s in series if s is not None]
        if not series:
            continue
        panel = synchronize(series, [session] * len(series), view=view)
        if panel is None or panel.n_assets == 0:
            continue
        sets.append(covariance_set(panel))
    store = MeasureStore(measures_root)
    return store.upsert_covariances(asset_class, sets)


def close_to_close_signs(closes: np.ndarray) -> np.ndarray:
    """Daily return signs from close prices; the first day has no return and
    counts as non-negative."""
    r = np.zeros(len(closes))
    r[1:] = np.sign(np.log(np.asarray(closes[1:], dtype=float) / np.asarray(closes[:-1], dtype=float)))
    return r


def prepare_model_inputs(rows: pd.DataFrame, measure: str, family: str) -> dict:
    """Aligned y / r_sign / rq arrays for one estimation window.

    Rows with the measure absent are dropped. HAR families keep the stored
    daily-variance scale; MEM families transform to annualized volatility.
    """
    if family not in MODEL_FAMILIES:
        raise EstimationError(f"unknown model family {family!r}")
    sel = rows[np.isfinite(rows[measure].to_numpy(dtype=float))]
    y_var = sel[measure].to_numpy(dtype=float)
    out = {"dates": sel["date"].tolist(), "rq": None, "r_sign": None}
    if family in HAR_FAMILIES:
        out["y"] = y_var
        if family == "harq":
            if measure.endswith("5_ss"):
                rq_col = "rq5_ss"
            elif measure.endswith("5"):
                rq_col = "rq5"
            else:
                rq_col = "rq1"
            out["rq"] = sel[rq_col].to_numpy(dtype=float)
    else:
        if np.any(y_var < 0):
            raise EstimationError(
                f"{measure} contains negative values; floor the series at zero or pick another measure"
            )
        out["y"] = annualize(y_var)
        out["r_sign"] = close_to_close_signs(sel["C"].to_numpy(dtype=float))
    return out


def estimate_and_forecast(
    window_rows: pd.DataFrame,
    later_rows: pd.DataFrame,
    measure: str,
    family: str,
    min_obs: int = 750,
) -> tuple:
    """(fit, forecast_result_or_None, notice) for one request."""
    inputs = prepare_model_inputs(window_rows, measure, family)
    y = inputs["y"]
    if family in HAR_FAMILIES:
        fit = fit_har(y, variant=family, rq=inputs["rq"], measure=measure, min_obs=min_obs)
    else:
        fit = fit_mem(y, r_sign=inputs["r_sign"], family=family, measure=measure, min_obs=min_obs)

    notice = None
    fc = None
    if len(later_rows):
        joined = pd.concat([window_rows, later_rows], ignore_index=True)
        inputs_full = prepare_model_inputs(joined, measure, family)
        try:
            fc = forecast(fit, inputs_full["y"], r_sign=inputs_full["r_sign"], rq=inputs_full["rq"])
        except ForecastError as exc:
            notice = str(exc)
    else:
        notice = f"no data past the estimation window; forecasting needs at least {MIN_HORIZON} later observations"
    return fit, fc, notice
