"""
src/fup/continuous.py

Continuous FUP: the norm of 1_{Omega-} F_h 1_{Omega+} on L^2(R) for the semiclassical Fourier transform
    F_h f(xi) = (2 pi h)^{-1/2} int exp(-i x xi / h) f(x) dx.

The restricted operator is discretized by the midpoint rule on each interval:
A[j, k] = sqrt(w_j) K(xi_j, x_k) sqrt(w_k), whose largest singular value converges to the norm.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.linalg import svdvals

from .discrete import NormResult
from .porous import PorousSet

logger = logging.getLogger(__name__)

# Points per length h below which the quadrature is rejected, and below which it is flagged.
MIN_POINTS_PER_H = 8
WARN_POINTS_PER_H = 64


def quadrature_nodes(omega: PorousSet, points_per_unit: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint nodes and weights, at least one cell per interval, spacing <= 1/points_per_unit."""
    nodes: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    widest = 0.0
    for a, b in omega.intervals:
        cells = max(1, int(np.ceil((b - a) * points_per_unit)))
        step = (b - a) / cells
        widest = max(widest, step)
        nodes.append(a + (np.arange(cells) + 0.5) * step)
        weights.append(np.full(cells, step))
    if widest * MIN_POINTS_PER_H > h:
        raise ValueError(
            f"Quadrature spacing {widest:.3e} is coarser than h/{MIN_POINTS_PER_H} = {h / MIN_POINTS_PER_H:.3e}; "
            "increase quad_points"
        )
    if widest * WARN_POINTS_PER_H > h:
        logger.warning("Quadrature resolves h=%.3g with only %.1f points per h", h, h / widest)
    if not nodes:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(nodes), np.concatenate(weights)


def continuous_frobenius_bound(omega_minus: PorousSet, omega_plus: PorousSet, h: float) -> float:
    """min(1, sqrt(|Omega-| |Omega+| / (2 pi h)))."""
    return float(min(1.0, np.sqrt(omega_minus.measure() * omega_plus.measure() / (2 * np.pi * h))))


def continuous_norm(
    omega_minus: PorousSet,
    omega_plus: PorousSet,
    h: float,
    quad_points: int = 2048,
) -> NormResult:
    """quad_points is the number of quadrature points per unit length."""
    if not 0 < h < 1:
        raise ValueError(f"h must lie in (0, 1), got {h}")
    if quad_points < 1:
        raise ValueError(f"quad_points must be positive, got {quad_points}")
    if not omega_minus.count or not omega_plus.count:
        return NormResult(value=0.0, method="dense-svd")

    xi, w_xi = quadrature_nodes(omega_minus, quad_points, h)
    x, w_x = quadrature_nodes(omega_plus, quad_points, h)
    kernel = np.exp(-1j * np.outer(xi, x) / h) / np.sqrt(2 * np.pi * h)
    matrix = np.sqrt(w_xi)[:, None] * kernel * np.sqrt(w_x)[None, :]
    value = float(svdvals(matrix)[0])
    logger.debug("continuous_norm h=%.3g on %dx%d nodes: %.6f", h, xi.size, x.size, value)
    return NormResult(value=value, method="dense-svd")
