"""Cross-sectional summaries over many fitted models of the same family."""

from __future__ import annotations

import numpy as np

from rvengine.models.base import ModelFit


def cross_sectional_summary(fits: list[ModelFit], alpha: float = 0.05) -> list[dict]:
    """Per-parameter distribution across assets: mean/std/min/median/max and
    the share of estimates significant at `alpha`."""
    if not fits:
        return []
    names = fits[0].param_names
    rows = []
    for i, name in enumerate(names):
        values = np.array([f.params[i] for f in fits], dtype=np.float64)
        pvals = np.array([f.p_values[i] for f in fits], dtype=np.float64)
        tested = pvals[~np.isnan(pvals)]
        rows.append(
            {
                "parameter": name,
                "n": len(fits),
                "mean": float(values.mean()),
                "std": float(values.std(ddof=1)) if len(fits) > 1 else 0.0,
                "min": float(values.min()),
                "median": float(np.median(values)),
                "max": float(values.max()),
                "pct_significant": float(100.0 * np.mean(tested < alpha)) if tested.size else 0.0,
            }
        )
    return rows
