"""Shared fit container and scale conversion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from rvengine.models.diagnostics import DiagnosticsReport

MIN_ESTIMATION_OBS = 750

HAR_FAMILIES = ("har", "harq")
MEM_FAMILIES = ("mem11", "amem11", "amem21")

# Estimation scale per family: HAR runs on daily variance to keep the linear
# structure; MEM runs on annualized volatility.
FAMILY_SCALES = {f: "daily_variance" for f in HAR_FAMILIES} | {
    f: "annualized_vol" for f in MEM_FAMILIES
}


def annualize(variance: float | np.ndarray):
    """Daily variance -> annualized volatility in percent: sqrt(252 v) * 100."""
    v = np.asarray(variance, dtype=np.float64)
    if np.any(v < 0):
        raise ValueError("negative variance; floor the measure at zero first (realized kernels may dip below zero)")
    out = np.sqrt(252.0 * v) * 100.0
    return float(out) if out.ndim == 0 else out


@dataclass
class ModelFit:
    """Estimated parameters, inference, diagnostics, and residual material
    needed to continue the model out of sample."""

    family: str
    measure: str | None
    scale: str
    param_names: list[str]
    params: np.ndarray
    std_errors: np.ndarray
    z_stats: np.ndarray
    p_values: np.ndarray
    residuals: np.ndarray  # HAR: OLS residuals; MEM: eps_t - 1
    diagnostics: DiagnosticsReport
    n_obs: int
    r_squared: float | None = None  # HAR families
    loglik: float | None = None  # MEM families
    sigma2_hat: float | None = None  # MEM families
    fitted: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any((self.p_values < 0) | (self.p_values > 1)):
            raise ValueError("p-values must lie in [0, 1]")

    @property
    def params_dict(self) -> dict[str, float]:
        return {name: float(v) for name, v in zip(self.param_names, self.params)}

    def params_table(self) -> list[dict]:
        rows = []
        for i, name in enumerate(self.param_names):
            rows.append(
                {
                    "name": name,
                    "estimate": float(self.params[i]),
                    "std_error": _none_if_nan(self.std_errors[i]),
                    "z": _none_if_nan(self.z_stats[i]),
                    "p_value": _none_if_nan(self.p_values[i]),
                }
            )
        return rows

    def to_report(self) -> dict:
        return {
            "family": self.family,
            "measure": self.measure,
            "scale": self.scale,
            "n_obs": self.n_obs,
            "parameters": self.params_table(),
            "r_squared": self.r_squared,
            "loglik": self.loglik,
            "sigma2_hat": self.sigma2_hat,
            "diagnostics": self.diagnostics.to_dict(),
        }


def _none_if_nan(x: float):
    x = float(x)
    return None if math.isnan(x) else x
