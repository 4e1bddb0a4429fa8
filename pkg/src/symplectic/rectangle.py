"""
src/symplectic/rectangle.py

Slow rectangles in straightened coordinates and the diameter of their images under the geodesic flow.

R^-: {|y| + |eta| <= alpha, |eta_1 - eta_1^0| <= w}, flowed forward by phi^t.
R^+: {|y| + |eta| <= alpha, |y_1 - y_1^0| <= w}, flowed backward by phi^{-t}.
|y| + |eta| is the l1 norm of the 4n straightened coordinates; the slab width w is alpha^2
(alpha for the control rectangles).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import qmc

from src.flows.bundle import recenter
from src.minkowski.lie_algebra import sign_value

from .chart import (
    DEFAULT_CHART_RADIUS,
    ChartCoords,
    CotangentPoint,
    chart_to_point,
    flow_cotangent,
    pairwise_cotangent_distances,
)
from .straighten import StraightenMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SlowRectangle:
    base: CotangentPoint
    straighten: StraightenMap
    alpha: float
    center: float = 0.0
    sign: str = "-"
    slab_width: Optional[float] = None
    chart_radius: float = DEFAULT_CHART_RADIUS

    def __post_init__(self) -> None:
        object.__setattr__(self, "sign", "+" if sign_value(self.sign) > 0 else "-")
        if not 0 < self.alpha <= self.chart_radius:
            raise ValueError(f"Rectangle size must satisfy 0 < alpha <= {self.chart_radius}, got {self.alpha}")
        if abs(self.center) > self.alpha:
            raise ValueError(f"Slab center must satisfy |center| <= alpha, got {self.center} (alpha={self.alpha})")
        if self.slab_width is None:
            object.__setattr__(self, "slab_width", self.alpha ** 2)
        if self.slab_width <= 0:
            raise ValueError(f"Slab width must be positive, got {self.slab_width}")

    @property
    def slab_index(self) -> int:
        """eta_1 for R^-, y_1 for R^+."""
        return 2 * self.base.n if self.sign == "-" else 0

    def contains(self, straight_vec, tol: float = 1e-8) -> bool:
        y = np.asarray(straight_vec, dtype=float)
        in_ball = np.sum(np.abs(y)) <= self.alpha + tol
        in_slab = abs(y[self.slab_index] - self.center) <= self.slab_width + tol
        return bool(in_ball and in_slab)


def rectangle_coordinates(rect: SlowRectangle, m: int) -> np.ndarray:
    """
    Deterministic (y, eta) samples, nested in m:
    the center, cross-polytope vertices on the three slab levels, then (m-2)*4n Halton points.
    """
    if m < 2:
        raise ValueError(f"Sample parameter m must be >= 2, got {m}")
    dim = 4 * rect.base.n
    k = rect.slab_index
    alpha, w, c0 = rect.alpha, rect.slab_width, rect.center

    rows: list[np.ndarray] = []
    center = np.zeros(dim)
    center[k] = c0
    rows.append(center)

    for level in (c0 - w, c0, c0 + w):
        if abs(level) > alpha:
            continue
        if level != c0:
            p = np.zeros(dim)
            p[k] = level
            rows.append(p)
        rho = alpha - abs(level)
        if rho <= 0:
            continue
        for i in range(dim):
            if i == k:
                continue
            for s in (1.0, -1.0):
                p = np.zeros(dim)
                p[k] = level
                p[i] = s * rho
                rows.append(p)

    count = (m - 2) * dim
    if count > 0:
        # Skip the first Halton point (the zero corner) so every point is interior-ish.
        cube = qmc.Halton(d=dim, scramble=False).random(count + 1)[1:]
        x = 2.0 * cube - 1.0
        slab = np.clip(c0 + w * x[:, k], -alpha, alpha)
        rest = np.delete(x, k, axis=1)
        budget = alpha - np.abs(slab)
        l1 = np.sum(np.abs(rest), axis=1)
        rest = rest * (budget / np.maximum(l1, 1.0))[:, None]
        pts = np.insert(rest, k, slab, axis=1)
        rows.extend(pts)

    return np.vstack(rows)


def rectangle_samples(rect: SlowRectangle, m: int) -> list[CotangentPoint]:
    coords = rectangle_coordinates(rect, m)
    points = []
    for y in coords:
        c = ChartCoords.from_vector(rect.straighten.to_chart(y))
        points.append(chart_to_point(rect.base, c, radius=rect.chart_radius))
    logger.debug("Rectangle alpha=%.3g sign=%s: %d samples (m=%d)", rect.alpha, rect.sign, len(points), m)
    return points


def diameter_of(points: list[CotangentPoint]) -> float:
    """Max pairwise cotangent distance after moving points[0] to the base point by an isometry."""
    if len(points) < 2:
        return 0.0
    moved = recenter([p.q for p in points], points[0].q)
    centered = [CotangentPoint(q, p.tau) for q, p in zip(moved, points)]
    return float(np.max(pairwise_cotangent_distances(centered)))


def propagated_diameter(
    rect: SlowRectangle,
    t: float,
    m: int,
    samples: Optional[list[CotangentPoint]] = None,
) -> float:
    """
    Diameter of phi^t(R^-) (or phi^{-t}(R^+)). Samples may be passed in to reuse them across a t-sweep.
    """
    if t < 0:
        raise ValueError(f"Propagation time must be >= 0, got {t}")
    pts = samples if samples is not None else rectangle_samples(rect, m)
    signed_t = t if rect.sign == "-" else -t
    flowed = [flow_cotangent(p, signed_t) for p in pts]
    return diameter_of(flowed)


@dataclass(frozen=True)
class DiameterFit:
    constant: float  # geometric-mean fit of diameter / (alpha e^t)
    bound: float  # max ratio: a single constant bounding every sample
    log_residual: float  # RMS deviation of log ratios from log(constant)


def fit_diameter_constant(ratios) -> DiameterFit:
    r = np.asarray(ratios, dtype=float)
    if r.size == 0 or np.any(r <= 0):
        raise ValueError("Diameter ratios must be a non-empty array of positive numbers")
    logs = np.log(r)
    mean = float(np.mean(logs))
    return DiameterFit(
        constant=float(np.exp(mean)),
        bound=float(np.max(r)),
        log_residual=float(np.sqrt(np.mean((logs - mean) ** 2))),
    )
