"""Command-line entry points, each a thin wrapper over a pipeline stage."""

from __future__ import annotations

import datetime as dt
import json
import logging
import sys
from pathlib import Path

import click

from rvengine.calendars import AssetClass
from rvengine.cleaning import CleaningParams
from rvengine.config import EngineConfig
from rvengine.errors import RVEngineError

log = logging.getLogger(__name__)

_CLASS_CHOICE = click.Choice([c.value for c in AssetClass])


def _date(value: str | None) -> dt.date | None:
    return dt.date.fromisoformat(value) if value else None


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="TOML file with paths, calendar, cleaning and kernel settings.")
@click.option("-v", "--verbose", is_flag=True)
@click.pass_context
def main(ctx, config_path, verbose):
    """Realized volatility engine: ticks to measures to models."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = EngineConfig.load(config_path)


@main.command()
@click.option("--raw", "raw_root", type=click.Path(), default=None)
@click.option("--store", "store_root", type=click.Path(), default=None)
@click.option("--workers", default=4)
@click.pass_obj
def ingest(cfg: EngineConfig, raw_root, store_root, workers):
    """Parse raw tick files, aggregate same-timestamp records, store per-day."""
    from rvengine.pipeline import ingest_tree

    n = ingest_tree(raw_root or cfg.raw_root, store_root or cfg.store_root, cfg.calendar, workers)
    click.echo(f"ingested {n} symbol-days")


@main.command()
@click.option("--store", "store_root", type=click.Path(), default=None)
@click.option("--symbol", "symbols", multiple=True, required=True)
@click.option("--from", "date_from", default=None)
@click.option("--to", "date_to", default=None)
@click.option("--k", default=None, type=int)
@click.option("--delta", default=None, type=float)
@click.option("--gamma", default=None, type=float)
@click.option("--report", "report_path", type=click.Path(), default=None)
@click.pass_obj
def clean(cfg: EngineConfig, store_root, symbols, date_from, date_to, k, delta, gamma, report_path):
    """Detect and flag price outliers on stored stock days."""
    from rvengine.pipeline import clean_stored_days

    params = CleaningParams(
        k=k if k is not None else cfg.cleaning.k,
        delta=delta if delta is not None else cfg.cleaning.delta,
        gamma=gamma if gamma is not None else cfg.cleaning.gamma,
    )
    reports = clean_stored_days(
        store_root or cfg.store_root, list(symbols), _date(date_from), _date(date_to), params)
    total = sum(r.n_outliers for r in reports)
    click.echo(f"cleaned {len(reports)} days, {total} outliers flagged")
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write("symbol,date,n_obs,n_outliers\n")
            for r in reports:
                fh.write(f"{r.symbol},{r.date},{r.n_obs},{r.n_outliers}\n")
        click.echo(f"report written to {report_path}")


@main.command()
@click.option("--store", "store_root", type=click.Path(), default=None)
@click.option("--symbol", required=True)
@click.option("--asset-class", "asset_class", type=_CLASS_CHOICE, default="stock")
@click.option("--date", "day", required=True)
@click.option("--interval", default=60, help="grid spacing in seconds")
@click.option("--subsample", default=None, help="e.g. 5x60: five grids shifted by 60s")
@click.option("--view", type=click.Choice(["cleaned", "raw"]), default="cleaned")
@click.option("--out", "out_path", type=click.Path(), default="-")
@click.pass_obj
def sample(cfg: EngineConfig, store_root, symbol, asset_class, day, interval, subsample, view, out_path):
    """Export previous-tick grids as CSV (time, price)."""
    from rvengine.calendars import session_for
    from rvengine.sampling import previous_tick_grid, subsample_grids
    from rvengine.store import load_day

    cls = AssetClass(asset_class)
    date = dt.date.fromisoformat(day)
    series = load_day(store_root or cfg.store_root, symbol, date, cls)
    if series is None:
        raise click.ClickException(f"no stored day {day} for {symbol}")
    session = session_for(cls, date, cfg.calendar)
    if session is None:
        raise click.ClickException(f"{day} is not a trading day for {asset_class}")
    if subsample:
        count, shift = subsample.split("x")
        grids = subsample_grids(series, session, base_s=interval, shift_s=int(shift),
                                count=int(count), view=view)
    else:
        g = previous_tick_grid(series, interval, session, view=view)
        grids = [g] if g is not None else []
    out = sys.stdout if out_path == "-" else open(out_path, "w", encoding="utf-8")
    try:
        out.write("grid,time_ms,price\n")
        for j, g in enumerate(grids):
            for t, p in zip(g.times, g.prices):
                out.write(f"{j},{t},{p}\n")
    finally:
        if out is not sys.stdout:
            out.close()


@main.command()
@click.option("--store", "store_root", type=click.Path(), default=None)
@click.option("--measures-root", type=click.Path(), default=None)
@click.option("--asset-class", "asset_class", type=_CLASS_CHOICE, default="stock")
@click.option("--symbol", "symbols", multiple=True)
@click.option("--from", "date_from", default=None)
@click.option("--to", "date_to", default=None)
@click.option("--view", type=click.Choice(["cleaned", "raw"]), default="cleaned")
@click.option("--workers", default=4)
@click.pass_obj
def measures(cfg: EngineConfig, store_root, measures_root, asset_class, symbols, date_from,
             date_to, view, workers):
    """Compute the daily measures table for stored days."""
    from rvengine.pipeline import compute_measure_rows

    n = compute_measure_rows(
        store_root or cfg.store_root, measures_root or cfg.measures_root,
        AssetClass(asset_class), cfg.calendar, list(symbols) or None,
        _date(date_from), _date(date_to), cfg.kernel, view, workers)
    click.echo(f"wrote {n} measure rows")


@main.command()
@click.option("--store", "store_root", type=click.Path(), default=None)
@click.option("--measures-root", type=click.Path(), default=None)
@click.option("--asset-class", "asset_class", type=_CLASS_CHOICE, default="stock")
@click.option("--from", "date_from", default=None)
@click.option("--to", "date_to", default=None)
@click.pass_obj
def covariances(cfg: EngineConfig, store_root, measures_root, asset_class, date_from, date_to):
    """Compute per-day covariance matrices for one asset class."""
    from rvengine.pipeline import compute_covariance_sets

    n = compute_covariance_sets(
        store_root or cfg.store_root, measures_root or cfg.measures_root,
        AssetClass(asset_class), cfg.calendar, _date(date_from), _date(date_to))
    click.echo(f"wrote covariance matrices for {n} days")


def _load_window(cfg, measures_root, symbol, date_from, date_to):
    from rvengine.measurestore import MeasureStore
    from rvengine.models.forecast import MAX_HORIZON

    store = MeasureStore(measures_root or cfg.measures_root)
    window = store.series(symbol, _date(date_from), _date(date_to))
    if not len(window):
        raise click.ClickException(f"no stored measures for {symbol}")
    later = store.rows_after(symbol, window["date"].max(), MAX_HORIZON)
    return window, later


@main.command()
@click.option("--measures-root", type=click.Path(), default=None)
@click.option("--symbol", "symbols", multiple=True, required=True)
@click.option("--measure", default="rv5")
@click.option("--model", "family", default="har",
              type=click.Choice(["har", "harq", "mem11", "amem11", "amem21"]))
@click.option("--from", "date_from", default=None)
@click.option("--to", "date_to", default=None)
@click.option("--min-obs", default=750)
@click.option("--json", "json_path", type=click.Path(), default=None)
@click.pass_obj
def fit(cfg: EngineConfig, measures_root, symbols, measure, family, date_from, date_to,
        min_obs, json_path):
    """Estimate a volatility model; several --symbol flags emit the
    cross-sectional summary."""
    from rvengine.models.batch import cross_sectional_summary
    from rvengine.pipeline import estimate_and_forecast

    fits = []
    reports = []
    for symbol in symbols:
        window, later = _load_window(cfg, measures_root, symbol, date_from, date_to)
        try:
            mfit, fc, notice = estimate_and_forecast(window, later, measure, family, min_obs)
        except RVEngineError as exc:
            raise click.ClickException(f"{symbol}: {exc}")
        fits.append(mfit)
        report = {"symbol": symbol} | mfit.to_report()
        if fc is not None:
            report["losses"] = {"mse": fc.mse, "qlike": fc.qlike}
        if notice:
            report["notice"] = notice
        reports.append(report)

    if len(fits) > 1:
        payload = {"family": family, "measure": measure,
                   "summary": cross_sectional_summary(fits), "fits": reports}
    else:
        payload = reports[0]
    text = json.dumps(payload, indent=2, default=str)
    if json_path:
        Path(json_path).write_text(text)
        click.echo(f"report written to {json_path}")
    else:
        click.echo(text)


@main.command()
@click.option("--measures-root", type=click.Path(), default=None)
@click.option("--symbol", required=True)
@click.option("--measure", default="rv5")
@click.option("--model", "family", default="har",
              type=click.Choice(["har", "harq", "mem11", "amem11", "amem21"]))
@click.option("--from", "date_from", default=None)
@click.option("--to", "date_to", default=None)
@click.option("--horizon", default=22)
@click.option("--min-obs", default=750)
@click.pass_obj
def forecast(cfg: EngineConfig, measures_root, symbol, measure, family, date_from, date_to,
             horizon, min_obs):
    """Estimate, then forecast sequentially past the window end."""
    import pandas as pd

    from rvengine.models import forecast as run_forecast
    from rvengine.pipeline import prepare_model_inputs
    from rvengine.models import fit_har, fit_mem
    from rvengine.models.base import HAR_FAMILIES

    window, later = _load_window(cfg, measures_root, symbol, date_from, date_to)
    if not len(later):
        raise click.ClickException("no observations past the window; nothing to forecast")
    inputs = prepare_model_inputs(window, measure, family)
    try:
        if family in HAR_FAMILIES:
            mfit = fit_har(inputs["y"], variant=family, rq=inputs["rq"], measure=measure,
                           min_obs=min_obs)
        else:
            mfit = fit_mem(inputs["y"], r_sign=inputs["r_sign"], family=family, measure=measure,
                           min_obs=min_obs)
        joined = prepare_model_inputs(pd.concat([window, later], ignore_index=True), measure, family)
        fc = run_forecast(mfit, joined["y"], r_sign=joined["r_sign"], rq=joined["rq"],
                          horizon=horizon)
    except RVEngineError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(fc.to_dict(), indent=2))


@main.command()
@click.option("--measures-root", type=click.Path(), default=None)
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000)
@click.option("--timeout", default=60.0, help="estimation timeout in seconds")
@click.pass_obj
def serve(cfg: EngineConfig, measures_root, host, port, timeout):
    """Run the HTTP service backing the dashboard."""
    import uvicorn

    from rvengine.service import create_app

    app = create_app(measures_root or cfg.measures_root, estimate_timeout_s=timeout)
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--measures-root", type=click.Path(), default=None)
@click.option("--asset-class", "asset_class", type=click.Choice(["stocks", "exchange_rates", "futures"]),
              default="stocks")
@click.option("--kind", type=click.Choice(["variance", "covariance"]), default="variance")
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.pass_obj
def export(cfg: EngineConfig, measures_root, asset_class, kind, out_path):
    """Write a bulk archive (CSV files + README) to disk."""
    from fastapi import HTTPException

    from rvengine.measurestore import MeasureStore
    from rvengine.service import build_archive

    store = MeasureStore(measures_root or cfg.measures_root)
    try:
        data = build_archive(store, asset_class, kind)
    except HTTPException as exc:
        raise click.ClickException(exc.detail)
    Path(out_path).write_bytes(data)
    click.echo(f"archive written to {out_path}")


@main.command()
@click.option("--raw", "raw_root", type=click.Path(), default=None)
@click.option("--symbol", "symbols", multiple=True, default=("SYN1", "SYN2"))
@click.option("--asset-class", "asset_class", type=_CLASS_CHOICE, default="stock")
@click.option("--from", "date_from", required=True)
@click.option("--to", "date_to", required=True)
@click.option("--ticks", default=4000)
@click.option("--seed", default=7)
@click.pass_obj
def simulate(cfg: EngineConfig, raw_root, symbols, asset_class, date_from, date_to, ticks, seed):
    """Generate a synthetic raw tick corpus (Brownian + jumps + noise)."""
    from rvengine.simulate import TickSimConfig, generate_corpus

    n = generate_corpus(
        raw_root or cfg.raw_root, list(symbols), _date(date_from), _date(date_to),
        cfg.calendar, AssetClass(asset_class), TickSimConfig(n_ticks=ticks), seed)
    click.echo(f"simulated {n} trading days for {len(symbols)} symbols")


if __name__ == "__main__":
    main()
