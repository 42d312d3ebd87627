"""Pure-NumPy implementations of the hot kernels.

Used when the compiled extension is unavailable (or when RVENGINE_PURE_PYTHON
is set). Every function here must match `rvengine._kernels._core` to float
round-off; the parity suite in tests/test_kernels_backend.py enforces that.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

# Rows per chunk when materialising neighborhood windows; bounds peak memory
# at roughly chunk * (k + 1) * 8 bytes.
_CHUNK = 65536


def bg_outlier_mask(prices: np.ndarray, k: int, delta: float, gamma: float) -> np.ndarray:
    """Neighborhood-deviation outlier mask over a day's valid prices.

    Each price is compared against the trimmed mean/sd of its k-observation
    neighborhood (self excluded): fixed first-k+1 window near the start,
    fixed last-k+1 window near the end, symmetric otherwise. A price is
    flagged when |p - mean| >= 3*sd + gamma.
    """
    p = np.ascontiguousarray(prices, dtype=np.float64)
    n = p.size
    out = np.zeros(n, dtype=np.uint8)
    if n < 2:
        return out
    half = k // 2
    win = min(k + 1, n)  # window size including the tested index
    trim = int((win - 1) * delta / 2.0)

    lo_edge = min(half, n)             # i < half -> fixed leading window
    hi_edge = max(n - half, lo_edge)   # i >= n - half -> fixed trailing window

    def scan(indices: np.ndarray, starts: np.ndarray) -> None:
        for j0 in range(0, indices.size, _CHUNK):
            idx = indices[j0 : j0 + _CHUNK]
            st = starts[j0 : j0 + _CHUNK]
            windows = p[st[:, None] + np.arange(win)[None, :]].copy()
            # hide the tested price so the row sort pushes it to the tail
            windows[np.arange(idx.size), idx - st] = np.inf
            windows.sort(axis=1)
            mid = windows[:, trim : win - 1 - trim]
            mean = mid.mean(axis=1)
            sd = np.sqrt(np.maximum(np.square(mid).mean(axis=1) - mean * mean, 0.0))
            out[idx] = (np.abs(p[idx] - mean) >= 3.0 * sd + gamma).astype(np.uint8)

    all_idx = np.arange(n)
    starts = np.empty(n, dtype=np.int64)
    starts[:lo_edge] = 0
    starts[hi_edge:] = n - win
    interior = all_idx[lo_edge:hi_edge]
    starts[lo_edge:hi_edge] = np.clip(interior - half, 0, n - win)
    scan(all_idx, starts)
    return out


def previous_tick_fill(tick_times: np.ndarray, tick_prices: np.ndarray, grid_times: np.ndarray) -> np.ndarray:
    """Last price at-or-before each grid time; leading grid points take the first price."""
    idx = np.searchsorted(tick_times, grid_times, side="right") - 1
    return np.asarray(tick_prices, dtype=np.float64)[np.clip(idx, 0, None)]


def autocov(returns: np.ndarray, max_lag: int) -> np.ndarray:
    """Raw autocovariances g[h] = sum_{i>h} r_i r_{i-h}, h = 0..max_lag."""
    r = np.asarray(returns, dtype=np.float64)
    g = np.empty(max_lag + 1, dtype=np.float64)
    g[0] = np.dot(r, r)
    for h in range(1, max_lag + 1):
        g[h] = np.dot(r[h:], r[:-h]) if h < r.size else 0.0
    return g


def mem_recursion(
    omega: float,
    alpha1: float,
    alpha2: float,
    beta1: float,
    gamma1: float,
    y: np.ndarray,
    yneg: np.ndarray,
    mu0: float,
    ybar: float,
    ynegbar: float,
) -> np.ndarray:
    """Conditional-mean path mu_t = w + a1*y[t-1] + a2*y[t-2] + b1*mu[t-1] + g1*yneg[t-1].

    Pre-sample values: y -> ybar, yneg -> ynegbar, mu -> mu0.
    """
    t_obs = y.shape[0]
    mu = np.empty(t_obs, dtype=np.float64)
    mu_prev = mu0
    for t in range(t_obs):
        y1 = y[t - 1] if t >= 1 else ybar
        y2 = y[t - 2] if t >= 2 else ybar
        yn1 = yneg[t - 1] if t >= 1 else ynegbar
        mu_prev = omega + alpha1 * y1 + alpha2 * y2 + beta1 * mu_prev + gamma1 * yn1
        mu[t] = mu_prev
    return mu


def mem_recursion_grad(
    omega: float,
    alpha1: float,
    alpha2: float,
    beta1: float,
    gamma1: float,
    y: np.ndarray,
    yneg: np.ndarray,
    mu0: float,
    ybar: float,
    ynegbar: float,
    dmu0: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """mu path plus its gradient wrt (omega, alpha1, alpha2, beta1, gamma1).

    d mu_t = x_t + beta1 * d mu_{t-1} with x_t = (1, y[t-1], y[t-2], mu[t-1], yneg[t-1]);
    dmu0 carries the derivative of the pre-sample mean mu0.
    """
    t_obs = y.shape[0]
    mu = np.empty(t_obs, dtype=np.float64)
    dmu = np.empty((t_obs, 5), dtype=np.float64)
    mu_prev = mu0
    d_prev = np.asarray(dmu0, dtype=np.float64).copy()
    for t in range(t_obs):
        y1 = y[t - 1] if t >= 1 else ybar
        y2 = y[t - 2] if t >= 2 else ybar
        yn1 = yneg[t - 1] if t >= 1 else ynegbar
        d_cur = beta1 * d_prev
        d_cur[0] += 1.0
        d_cur[1] += y1
        d_cur[2] += y2
        d_cur[3] += mu_prev
        d_cur[4] += yn1
        mu_prev = omega + alpha1 * y1 + alpha2 * y2 + beta1 * mu_prev + gamma1 * yn1
        mu[t] = mu_prev
        dmu[t] = d_cur
        d_prev = d_cur
    return mu, dmu
