# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: outlier neighborhoods, previous-tick fill,
autocovariances, and the multiplicative-error recursion.

The NumPy fallback in _fallback.py implements the same contracts; keep the
arithmetic in the two files aligned.
"""

import numpy as np

from libc.math cimport fabs, sqrt
from libc.string cimport memmove

BACKEND = "cython"


cdef inline Py_ssize_t _lower_bound(double* a, Py_ssize_t size, double x) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = size, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline void _sw_remove(double* a, Py_ssize_t size, double x) noexcept nogil:
    cdef Py_ssize_t pos = _lower_bound(a, size, x)
    memmove(&a[pos], &a[pos + 1], (size - 1 - pos) * sizeof(double))


cdef inline void _sw_insert(double* a, Py_ssize_t size, double x) noexcept nogil:
    # size = element count before insertion; capacity must exceed it
    cdef Py_ssize_t pos = _lower_bound(a, size, x)
    memmove(&a[pos + 1], &a[pos], (size - pos) * sizeof(double))
    a[pos] = x


def bg_outlier_mask(prices, int k, double delta, double gamma):
    """Neighborhood-deviation outlier mask; see _fallback.bg_outlier_mask."""
    p_arr = np.ascontiguousarray(prices, dtype=np.float64)
    cdef double[::1] p = p_arr
    cdef Py_ssize_t n = p.shape[0]
    out_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    if n < 2:
        return out_arr

    cdef Py_ssize_t half = k // 2
    cdef Py_ssize_t win = k + 1 if k + 1 < n else n
    cdef Py_ssize_t trim = <Py_ssize_t>((win - 1) * delta / 2.0)
    cdef Py_ssize_t lo_edge = half if half < n else n
    cdef Py_ssize_t hi_edge = n - half if n - half > lo_edge else lo_edge
    cdef Py_ssize_t nsurv = (win - 1) - 2 * trim
    if nsurv <= 0:
        raise ValueError("trimming removed every neighborhood observation")

    sw_arr = np.sort(p_arr[:win])
    cdef double[::1] sw = sw_arr
    cdef double* swp = &sw[0]
    cdef Py_ssize_t start = 0, want, i, j, pos, rank
    cdef Py_ssize_t lo_r = trim, hi_r = trim + nsurv
    cdef double s, s2, mean, var, v

    with nogil:
        for i in range(n):
            if i < lo_edge:
                want = 0
            elif i >= hi_edge:
                want = n - win
            else:
                want = i - half
                if want < 0:
                    want = 0
                elif want > n - win:
                    want = n - win
            while start < want:
                _sw_remove(swp, win, p[start])
                _sw_insert(swp, win - 1, p[start + win])
                start += 1
            pos = _lower_bound(swp, win, p[i])
            s = 0.0
            s2 = 0.0
            rank = 0
            for j in range(win):
                if j == pos:
                    continue
                if lo_r <= rank < hi_r:
                    v = swp[j]
                    s += v
                    s2 += v * v
                rank += 1
            mean = s / nsurv
            var = s2 / nsurv - mean * mean
            if var < 0.0:
                var = 0.0
            if fabs(p[i] - mean) >= 3.0 * sqrt(var) + gamma:
                out[i] = 1
    return out_arr


def previous_tick_fill(tick_times, tick_prices, grid_times):
    """Last price at-or-before each grid time; leading grid points take the first price."""
    t_arr = np.ascontiguousarray(tick_times, dtype=np.int64)
    p_arr = np.ascontiguousarray(tick_prices, dtype=np.float64)
    g_arr = np.ascontiguousarray(grid_times, dtype=np.int64)
    cdef long long[::1] t = t_arr
    cdef double[::1] p = p_arr
    cdef long long[::1] g = g_arr
    cdef Py_ssize_t nt = t.shape[0], ng = g.shape[0]
    out_arr = np.empty(ng, dtype=np.float64)
    cdef double[::1] out = out_arr
    if nt == 0:
        raise ValueError("previous_tick_fill needs at least one tick")
    cdef Py_ssize_t i, j = 0
    cdef double last = p[0]
    with nogil:
        for i in range(ng):
            while j < nt and t[j] <= g[i]:
                last = p[j]
                j += 1
            out[i] = last
    return out_arr


def mem_recursion(double omega, double alpha1, double alpha2, double beta1, double gamma1,
                  y, yneg, double mu0, double ybar, double ynegbar):
    """Conditional-mean path; see _fallback.mem_recursion."""
    y_arr = np.ascontiguousarray(y, dtype=np.float64)
    yn_arr = np.ascontiguousarray(yneg, dtype=np.float64)
    cdef double[::1] yv = y_arr
    cdef double[::1] ynv = yn_arr
    cdef Py_ssize_t t_obs = yv.shape[0]
    mu_arr = np.empty(t_obs, dtype=np.float64)
    cdef double[::1] mu = mu_arr
    cdef Py_ssize_t t
    cdef double mu_prev = mu0, y1, y2, yn1
    with nogil:
        for t in range(t_obs):
            y1 = yv[t - 1] if t >= 1 else ybar
            y2 = yv[t - 2] if t >= 2 else ybar
            yn1 = ynv[t - 1] if t >= 1 else ynegbar
            mu_prev = omega + alpha1 * y1 + alpha2 * y2 + beta1 * mu_prev + gamma1 * yn1
            mu[t] = mu_prev
    return mu_arr


def mem_recursion_grad(double omega, double alpha1, double alpha2, double beta1, double gamma1,
                       y, yneg, double mu0, double ybar, double ynegbar, dmu0):
    """mu path plus gradient wrt (omega, alpha1, alpha2, beta1, gamma1)."""
    y_arr = np.ascontiguousarray(y, dtype=np.float64)
    yn_arr = np.ascontiguousarray(yneg, dtype=np.float64)
    d0_arr = np.ascontiguousarray(dmu0, dtype=np.float64)
    cdef double[::1] yv = y_arr
    cdef double[::1] ynv = yn_arr
    cdef double[::1] d0 = d0_arr
    cdef Py_ssize_t t_obs = yv.shape[0]
    mu_arr = np.empty(t_obs, dtype=np.float64)
    dmu_arr = np.empty((t_obs, 5), dtype=np.float64)
    cdef double[::1] mu = mu_arr
    cdef double[:, ::1] dmu = dmu_arr
    cdef Py_ssize_t t, q
    cdef double mu_prev = mu0, y1, y2, yn1
    cdef double d_prev[5]
    for q in range(5):
        d_prev[q] = d0[q]
    with nogil:
        for t in range(t_obs):
            y1 = yv[t - 1] if t >= 1 else ybar
            y2 = yv[t - 2] if t >= 2 else ybar
            yn1 = ynv[t - 1] if t >= 1 else ynegbar
            for q in range(5):
                d_prev[q] = beta1 * d_prev[q]
            d_prev[0] += 1.0
            d_prev[1] += y1
            d_prev[2] += y2
            d_prev[3] += mu_prev
            d_prev[4] += yn1
            mu_prev = omega + alpha1 * y1 + alpha2 * y2 + beta1 * mu_prev + gamma1 * yn1
            mu[t] = mu_prev
            for q in range(5):
                dmu[t, q] = d_prev[q]
    return mu_arr, dmu_arr
