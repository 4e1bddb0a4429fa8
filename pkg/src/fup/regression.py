"""
src/fup/regression.py

Log-log fit of norm against scale: log norm = log C + beta log scale.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

logger = logging.getLogger(__name__)

MIN_SAMPLES = 4


@dataclass(frozen=True)
class BetaFit:
    beta_hat: float
    log_C: float
    r_squared: float
    stderr: float
    samples: int

    def to_dict(self) -> dict:
        return {
            "beta_hat": self.beta_hat,
            "log_C": self.log_C,
            "r_squared": self.r_squared,
            "stderr": self.stderr,
            "samples": self.samples,
        }


def beta_regression(samples) -> BetaFit:
    """samples: iterable of (scale, norm) with scale > 0 and norm > 0."""
    arr = np.asarray(list(samples), dtype=float).reshape(-1, 2)
    if arr.shape[0] < MIN_SAMPLES:
        raise ValueError(f"beta_regression needs at least {MIN_SAMPLES} samples, got {arr.shape[0]}")
    scales, norms = arr[:, 0], arr[:, 1]
    if np.any(scales <= 0) or np.any(norms <= 0):
        raise ValueError("Scales and norms must be positive for a log-log fit")
    x = np.log(scales)
    if np.ptp(x) == 0:
        raise ValueError("Degenerate samples: all scales are equal")
    y = np.log(norms)

    if np.ptp(y) == 0:
        # Constant norms: linregress reports r = 0 there, but the fit is exact.
        return BetaFit(beta_hat=0.0, log_C=float(y[0]), r_squared=1.0, stderr=0.0, samples=int(x.size))

    fit = linregress(x, y)
    result = BetaFit(
        beta_hat=float(fit.slope),
        log_C=float(fit.intercept),
        r_squared=float(fit.rvalue ** 2),
        stderr=float(fit.stderr),
        samples=int(x.size),
    )
    logger.debug("beta_regression on %d samples: beta=%.4f r^2=%.4f", x.size, result.beta_hat, result.r_squared)
    return result
