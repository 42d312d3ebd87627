"""Synthetic data generators: tick-level days (geometric Brownian motion with
optional jumps and microstructure noise) and daily model series for the
estimation harness.

Simulated days place a tick exactly on the session open and close so the
previous-tick grid spans the full session and the integrated variance of the
sampled path equals the configured daily variance.
"""

from __future__ import annotations

import datetime as dt
import logging
from dataclasses import dataclass, field

import numpy as np

from rvengine.calendars import MS_PER_SECOND, AssetClass, TradingSession
from rvengine.ticks import TickSeries, _flags_for

log = logging.getLogger(__name__)


@dataclass
class TickSimConfig:
    iv_daily: float = 1e-4  # integrated variance per session (~16% annualized)
    n_ticks: int = 4000
    noise_std: float = 0.0  # iid log-price noise
    jumps: list[tuple[float, float]] = field(default_factory=list)  # (fraction of session, log size)
    price0: float = 100.0
    volume_mean: float = 300.0
    odd_lot_frac: float = 0.3
    second_resolution: bool = False  # truncate timestamps for quote-driven feeds


def simulate_tick_day(
    symbol: str,
    date: dt.date,
    session: TradingSession,
    cfg: TickSimConfig,
    rng: np.random.Generator,
    asset_class: AssetClass = AssetClass.STOCK,
) -> TickSeries:
    """One synthetic symbol-day of trades (or quotes for non-stock classes)."""
    span = session.close_ms - session.open_ms
    n = max(cfg.n_ticks, 3)
    inner = session.open_ms + np.sort(rng.integers(1, span, size=n - 2))
    times = np.concatenate([[session.open_ms], inner, [session.close_ms]]).astype(np.int64)
    if cfg.second_resolution:
        times = (times // MS_PER_SECOND) * MS_PER_SECOND
        times[-1] = session.close_ms
    # collapse duplicate stamps so the path stays strictly increasing in time
    times = np.unique(times)
    n = times.size

    frac = (times - session.open_ms) / span
    dvar = np.diff(frac, prepend=0.0) * cfg.iv_daily
    x = np.cumsum(rng.standard_normal(n) * np.sqrt(dvar))
    for when, size in cfg.jumps:
        x[frac >= when] += size
    y = x + (cfg.noise_std * rng.standard_normal(n) if cfg.noise_std > 0 else 0.0)
    prices = cfg.price0 * np.exp(y)

    flags = _flags_for(times, session)
    if asset_class is AssetClass.STOCK:
        odd = rng.random(n) < cfg.odd_lot_frac
        volumes = np.where(
            odd,
            rng.integers(1, 100, size=n),
            rng.integers(100, max(int(2 * cfg.volume_mean), 101), size=n),
        ).astype(np.int64)
        return TickSeries(
            symbol=symbol, date=date, asset_class=asset_class,
            times=times, prices=prices, flags=flags,
            volumes=volumes, trades=np.ones(n, dtype=np.int64),
        )
    spread = 2e-4 * prices
    return TickSeries(
        symbol=symbol, date=date, asset_class=asset_class,
        times=times, prices=prices, flags=flags,
        bids=prices - spread / 2, asks=prices + spread / 2,
    )


def write_raw_csv(series: TickSeries, root, fmt_ms: bool = True):
    """Write one day in the delimited raw-file schema under the class layout."""
    from pathlib import Path

    from rvengine.calendars import CLASS_DIRS

    folder = Path(root) / CLASS_DIRS[series.asset_class] / series.symbol
    folder.mkdir(parents=True, exist_ok=True)
    path = folder / f"{series.date.strftime('%Y_%m_%d')}.csv"
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(len(series)):
            ms = int(series.times[i])
            sec, msec = divmod(ms, 1000)
            hh, rem = divmod(sec, 3600)
            mm, ss = divmod(rem, 60)
            stamp = f"{hh:02d}:{mm:02d}:{ss:02d}.{msec:03d}" if fmt_ms else f"{hh:02d}:{mm:02d}:{ss:02d}"
            if series.asset_class is AssetClass.STOCK:
                fh.write(f"{stamp},{series.prices[i]:.6f},{series.volumes[i]},{series.trades[i]}\n")
            else:
                fh.write(
                    f"{stamp},{series.prices[i]:.6f},{series.bids[i]:.6f},{series.asks[i]:.6f},0,0\n"
                )
    return path


def generate_corpus(
    raw_root,
    symbols: list[str],
    start: dt.date,
    end: dt.date,
    calendar,
    asset_class: AssetClass = AssetClass.STOCK,
    cfg: TickSimConfig | None = None,
    seed: int = 7,
) -> int:
    """Raw tick files for every trading day in [start, end]; returns day count."""
    from rvengine.calendars import session_for

    cfg = cfg or TickSimConfig()
    rng = np.random.default_rng(seed)
    n_days = 0
    day = start
    while day <= end:
        session = session_for(asset_class, day, calendar)
        if session is not None:
            for sym in symbols:
                series = simulate_tick_day(sym, day, session, cfg, rng, asset_class)
                write_raw_csv(series, raw_root)
            n_days += 1
        day += dt.timedelta(days=1)
    return n_days


def simulate_har_series(
    omega: float,
    alpha_d: float,
    alpha_w: float,
    alpha_m: float,
    t_obs: int,
    noise_std: float = 0.0,
    rng: np.random.Generator | None = None,
    y0: float = 1.0,
) -> np.ndarray:
    """Daily series following the heterogeneous autoregression exactly
    (noise_std = 0 gives the deterministic recursion for recovery tests)."""
    from rvengine.models.har import har_components

    rng = rng or np.random.default_rng(0)
    y = np.empty(t_obs + 22)
    y[:22] = y0
    for t in range(22, y.size):
        d, w, m = har_components(y, t)
        eps = noise_std * rng.standard_normal() if noise_std > 0 else 0.0
        y[t] = omega + alpha_d * d + alpha_w * w + alpha_m * m + eps
    return y[22:]


def simulate_mem_series(
    params: dict[str, float],
    family: str,
    t_obs: int,
    shape: float = 4.0,
    neg_prob: float = 0.5,
    rng: np.random.Generator | None = None,
    burn: int = 500,
) -> tuple[np.ndarray, np.ndarray]:
    """(y, r_sign) from a multiplicative-error process with unit-mean Gamma
    innovations and i.i.d. return signs."""
    from rvengine.models.mem import FAMILY_PARAMS, _to_full

    rng = rng or np.random.default_rng(0)
    theta = np.array([params[n] for n in FAMILY_PARAMS[family]])
    omega, alpha1, alpha2, beta1, gamma1 = _to_full(theta, family)
    total = t_obs + burn
    eps = rng.gamma(shape, 1.0 / shape, size=total)
    signs = np.where(rng.random(total) < neg_prob, -1.0, 1.0)
    y = np.empty(total)
    pers = alpha1 + alpha2 + beta1 + gamma1 / 2.0
    mu_prev = omega / (1.0 - pers)
    y_prev = y_prev2 = mu_prev
    neg_prev = 0.0
    for t in range(total):
        mu = omega + alpha1 * y_prev + alpha2 * y_prev2 + beta1 * mu_prev + gamma1 * neg_prev
        y[t] = mu * eps[t]
        y_prev2 = y_prev
        y_prev = y[t]
        neg_prev = y[t] if signs[t] < 0 else 0.0
        mu_prev = mu
    return y[burn:], signs[burn:]
