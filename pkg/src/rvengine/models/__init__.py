"""Volatility model estimation, diagnostics, and forecasting."""

from rvengine.models.base import ModelFit, annualize
from rvengine.models.diagnostics import DiagnosticsReport, arch_lm, diagnostics_report, ljung_box
from rvengine.models.forecast import ForecastResult, forecast
from rvengine.models.hac import newey_west_cov, newey_west_lags
from rvengine.models.har import build_har_design, fit_har
from rvengine.models.mem import fit_mem, mem_filter

__all__ = [
    "ModelFit",
    "annualize",
    "DiagnosticsReport",
    "diagnostics_report",
    "ljung_box",
    "arch_lm",
    "ForecastResult",
    "forecast",
    "newey_west_cov",
    "newey_west_lags",
    "build_har_design",
    "fit_har",
    "fit_mem",
    "mem_filter",
]
