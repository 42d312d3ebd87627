"""Multiplicative error models on annualized volatility, estimated by QML.

Families: the baseline (1,1) recursion, its asymmetric extension with a
negative-return term, and the two-lag asymmetric variant. The conditional
mean follows

    mu_t = omega + alpha1 y_{t-1} + alpha2 y_{t-2} + beta1 mu_{t-1}
           + gamma1 y_{t-1} 1[r_{t-1} < 0]

with unused coefficients pinned at zero per family. The filter starts from
the model-implied unconditional mean; pre-sample lags take the sample mean
(its negative-signed half for the asymmetric term). Estimation maximizes the
unit-mean exponential-family quasi likelihood sum(log e_t - e_t + 1) with
e_t = y_t / mu_t under each family's positivity and stationarity
constraints, via sequential quadratic programming with analytic gradients.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy import optimize, stats

from rvengine import _kernels
from rvengine.errors import EstimationError
from rvengine.models.base import MIN_ESTIMATION_OBS, ModelFit
from rvengine.models.diagnostics import diagnostics_report

log = logging.getLogger(__name__)

# Positions of each family's parameters in the full coefficient vector
# (omega, alpha1, alpha2, beta1, gamma1).
FULL_NAMES = ("omega", "alpha1", "alpha2", "beta1", "gamma1")
FAMILY_PARAMS = {
    "mem11": ("omega", "alpha1", "beta1"),
    "amem11": ("omega", "alpha1", "beta1", "gamma1"),
    "amem21": ("omega", "alpha1", "alpha2", "beta1", "gamma1"),
}
_PERSISTENCE_W = np.array([0.0, 1.0, 1.0, 1.0, 0.5])  # weights on the full vector

MAX_PERSISTENCE = 1.0 - 1e-6
_OMEGA_FLOOR = 1e-10
_CONVERGENCE_FTOL = 1e-8
_MAX_ITER = 500


def _to_full(theta: np.ndarray, family: str) -> np.ndarray:
    full = np.zeros(5)
    for value, name in zip(theta, FAMILY_PARAMS[family]):
        full[FULL_NAMES.index(name)] = value
    return full


def persistence(params: dict[str, float] | np.ndarray, family: str) -> float:
    """alpha1 (+ alpha2) + beta1 + gamma1/2, per family."""
    if isinstance(params, dict):
        theta = np.array([params.get(n, 0.0) for n in FAMILY_PARAMS[family]])
    else:
        theta = np.asarray(params, dtype=np.float64)
    return float(_PERSISTENCE_W @ _to_full(theta, family))


def _neg_part(y: np.ndarray, r_sign: np.ndarray | None, family: str) -> tuple[np.ndarray, float]:
    if family == "mem11":
        return np.zeros_like(y), 0.0
    if r_sign is None:
        raise EstimationError(f"{family} needs a daily return-sign series for its asymmetric term")
    r_sign = np.asarray(r_sign)
    if r_sign.size != y.size:
        raise EstimationError("return-sign series must align with y")
    yneg = np.where(r_sign < 0, y, 0.0)
    # pre-sample expectation: half the mean, signs being symmetric a priori
    return yneg, float(y.mean()) / 2.0


def mem_filter(
    params: dict[str, float] | np.ndarray,
    y: np.ndarray,
    r_sign: np.ndarray | None = None,
    family: str = "mem11",
) -> np.ndarray:
    """Conditional-mean path for admissible parameters."""
    y = np.asarray(y, dtype=np.float64)
    if isinstance(params, dict):
        theta = np.array([params[n] for n in FAMILY_PARAMS[family]])
    else:
        theta = np.asarray(params, dtype=np.float64)
    full = _to_full(theta, family)
    pers = float(_PERSISTENCE_W @ full)
    if pers >= 1.0:
        raise EstimationError(f"non-stationary parameters (persistence {pers:.6f})")
    yneg, ynegbar = _neg_part(y, r_sign, family)
    mu0 = full[0] / (1.0 - pers)
    mu = _kernels.mem_recursion(*full, y, yneg, mu0, float(y.mean()), ynegbar)
    if np.any(mu <= 0):
        raise EstimationError("conditional mean path hit a non-positive value")
    return mu


# Finite penalty for inadmissible trial points; keeps the line search sane.
_PENALTY = -1e12


def _loglik_and_grad(full: np.ndarray, y: np.ndarray, yneg: np.ndarray, ybar: float, ynegbar: float):
    """Quasi log-likelihood and its gradient over the full coefficient vector."""
    pers = float(_PERSISTENCE_W @ full)
    one_minus = 1.0 - pers
    if one_minus <= 0 or full[0] <= 0:
        return _PENALTY, np.zeros(5)
    mu0 = full[0] / one_minus
    dmu0 = (_PERSISTENCE_W * mu0 / one_minus).copy()
    dmu0[0] += 1.0 / one_minus
    mu, dmu = _kernels.mem_recursion_grad(*full, y, yneg, mu0, ybar, ynegbar, dmu0)
    if np.any(mu <= 0):
        return _PENALTY, np.zeros(5)
    eps = y / mu
    ll = float(np.sum(np.log(eps) - eps + 1.0))
    grad = (dmu * ((eps - 1.0) / mu)[:, None]).sum(axis=0)
    return ll, grad


def _constraints(family: str, free_names: list[str], pinned: dict[str, float]):
    """SLSQP inequality set g(theta) >= 0 over the free parameters.

    Constraints touching only pinned parameters are constant and dropped, so a
    family with a coefficient fixed at zero optimizes exactly the nested
    problem.
    """

    def val(theta, name):
        return theta[free_names.index(name)] if name in free_names else pinned.get(name, 0.0)

    names = FAMILY_PARAMS[family]

    def pers_of(th):
        return sum(
            w * val(th, n)
            for w, n in zip((1.0, 1.0, 1.0, 0.5), ("alpha1", "alpha2", "beta1", "gamma1"))
            if n in names
        )

    candidates = [
        (lambda th: val(th, "omega") - _OMEGA_FLOOR, {"omega"}),
        (lambda th: val(th, "beta1"), {"beta1"}),
        (lambda th: MAX_PERSISTENCE - val(th, "beta1"), {"beta1"}),
        (lambda th: MAX_PERSISTENCE - pers_of(th), {"alpha1", "alpha2", "beta1", "gamma1"}),
        (lambda th: val(th, "alpha1"), {"alpha1"}),
    ]
    if family == "amem11":
        candidates.append((lambda th: val(th, "gamma1"), {"gamma1"}))
    if family == "amem21":
        candidates.extend(
            [
                (lambda th: val(th, "alpha1") + val(th, "gamma1"), {"alpha1", "gamma1"}),
                (
                    lambda th: val(th, "alpha2") + val(th, "alpha1") * val(th, "beta1"),
                    {"alpha2", "alpha1", "beta1"},
                ),
                (
                    lambda th: val(th, "alpha2")
                    + (val(th, "alpha1") + val(th, "gamma1")) * val(th, "beta1"),
                    {"alpha2", "alpha1", "gamma1", "beta1"},
                ),
            ]
        )
    free = set(free_names)
    return [
        {"type": "ineq", "fun": fun}
        for fun, involved in candidates
        if involved & free
    ]


def _initial_theta(family: str, ybar: float) -> dict[str, float]:
    init = {"omega": ybar * 0.3, "alpha1": 0.1, "beta1": 0.6, "alpha2": 0.0, "gamma1": 0.0}
    return {n: init[n] for n in FAMILY_PARAMS[family]}


def fit_mem(
    y: np.ndarray,
    r_sign: np.ndarray | None = None,
    family: str = "mem11",
    measure: str | None = None,
    min_obs: int = MIN_ESTIMATION_OBS,
    fixed: dict[str, float] | None = None,
) -> ModelFit:
    """Constrained QML fit; `fixed` pins named parameters (nesting checks).

    Non-convergence triggers one retry from a perturbed start before failing.
    """
    if family not in FAMILY_PARAMS:
        raise ValueError(f"unknown family {family!r}")
    y = np.asarray(y, dtype=np.float64)
    if y.size < min_obs:
        raise EstimationError(f"estimation needs at least {min_obs} observations, got {y.size}")
    if np.any(y <= 0):
        raise EstimationError(
            "series contains non-positive values; choose a strictly positive measure or floor it"
        )
    ybar = float(y.mean())
    yneg, ynegbar = _neg_part(y, r_sign, family)

    names = list(FAMILY_PARAMS[family])
    fixed = dict(fixed or {})
    for name in fixed:
        if name not in names:
            raise ValueError(f"{name!r} is not a {family} parameter")
    free_names = [n for n in names if n not in fixed]

    def assemble(th_free: np.ndarray) -> np.ndarray:
        merged = dict(zip(free_names, th_free))
        merged.update(fixed)
        return np.array([merged[n] for n in names])

    def objective(th_free: np.ndarray):
        full = _to_full(assemble(th_free), family)
        ll, grad = _loglik_and_grad(full, y, yneg, ybar, ynegbar)
        gsel = np.array([grad[FULL_NAMES.index(n)] for n in free_names])
        return -ll, -gsel

    cons = _constraints(family, free_names, fixed)
    start_map = _initial_theta(family, ybar)
    start_map.update(fixed)
    x0 = np.array([start_map[n] for n in free_names])

    result = None
    rng = np.random.default_rng(0)
    for attempt in range(2):
        res = optimize.minimize(
            objective,
            x0,
            jac=True,
            method="SLSQP",
            constraints=cons,
            options={"maxiter": _MAX_ITER, "ftol": _CONVERGENCE_FTOL},
        )
        if res.success:
            result = res
            break
        log.warning("%s fit attempt %d did not converge: %s", family, attempt + 1, res.message)
        x0 = x0 * (1.0 + 0.1 * rng.standard_normal(x0.size))
        x0 = np.abs(x0)
    if result is None:
        raise EstimationError(f"{family} optimizer failed to converge after retry: {res.message}")

    theta = assemble(result.x)
    full = _to_full(theta, family)
    # nudge boundary round-off back into the admissible set
    full[0] = max(full[0], _OMEGA_FLOOR)
    theta = np.array([full[FULL_NAMES.index(n)] for n in names])

    mu = mem_filter(theta, y, r_sign=r_sign, family=family)
    eps = y / mu
    u = eps - 1.0
    sigma2 = float(np.mean(u**2))
    ll = float(np.sum(np.log(eps) - eps + 1.0))

    # QML covariance: sigma2 * [sum mu_t^-2 dmu dmu']^-1 over the free block
    pers = float(_PERSISTENCE_W @ full)
    mu0 = full[0] / (1.0 - pers)
    dmu0 = (_PERSISTENCE_W * mu0 / (1.0 - pers)).copy()
    dmu0[0] += 1.0 / (1.0 - pers)
    _, dmu = _kernels.mem_recursion_grad(*full, y, yneg, mu0, ybar, ynegbar, dmu0)
    free_cols = [FULL_NAMES.index(n) for n in free_names]
    g = dmu[:, free_cols] / mu[:, None]
    info = g.T @ g
    se = np.full(len(names), np.nan)
    try:
        cov = sigma2 * np.linalg.inv(info)
        se_free = np.sqrt(np.diag(cov))
        for n, s in zip(free_names, se_free):
            se[names.index(n)] = s
    except np.linalg.LinAlgError:
        log.warning("singular information matrix; standard errors unavailable")
    with np.errstate(divide="ignore", invalid="ignore"):
        z = theta / se
        p = 2.0 * stats.norm.sf(np.abs(z))

    fit = ModelFit(
        family=family,
        measure=measure,
        scale="annualized_vol",
        param_names=names,
        params=theta,
        std_errors=se,
        z_stats=z,
        p_values=p,
        residuals=u,
        diagnostics=diagnostics_report(u),
        n_obs=int(y.size),
        loglik=ll,
        sigma2_hat=sigma2,
        fitted=mu,
        extra={
            "eps": eps,
            "persistence": persistence(theta, family),
            "fixed": fixed,
            "iterations": int(result.nit),
            "ybar": ybar,
            "ynegbar": ynegbar,
        },
    )
    return fit
