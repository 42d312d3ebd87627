"""rvengine: tick data in, realized measures and volatility models out.

Pipeline stages: parse/aggregate/store raw ticks, detect and replace price
outliers, sample previous-tick grids, compute daily variance and covariance
measures, estimate and forecast HAR- and MEM-family models. A CLI and HTTP
service wrap the same building blocks.
"""

from rvengine._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
