"""
src/symplectic/chart.py

Exponential chart coordinates on T*CH^n minus the zero section.

A cotangent point is a sphere bundle point q together with a fiber radius tau > 0.
Chart coordinates c = (s, u) around a base point p0 are
    chart_to_point(p0, c) = (q(p0.lift . exp(sum_i s_i B_i)), p0.tau . e^u)
with B_i the ordered frame. The inverse is computed by Levenberg-Marquardt over (s, phase).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.optimize import least_squares

from src.flows.bundle import SphereBundlePoint, geodesic_flow, pairwise_bundle_distances
from src.minkowski.groups import GroupElement, group_inverse
from src.minkowski.lie_algebra import combine

logger = logging.getLogger(__name__)

DEFAULT_CHART_RADIUS = 0.5


@dataclass(frozen=True, eq=False)
class CotangentPoint:
    q: SphereBundlePoint
    tau: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.tau) or self.tau <= 0:
            raise ValueError(f"Fiber radius tau must be positive, got {self.tau}")

    @property
    def n(self) -> int:
        return self.q.n

    @property
    def chart_dim(self) -> int:
        return 4 * self.q.n


@dataclass(frozen=True, eq=False)
class ChartCoords:
    """s: exponential coordinates along the frame (length 4n-1); u = log(tau / tau0)."""
    s: np.ndarray
    u: float = 0.0

    def __post_init__(self) -> None:
        s = np.array(self.s, dtype=float)
        if s.ndim != 1:
            raise ValueError(f"Chart coordinate s must be one-dimensional, got shape {s.shape}")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "u", float(self.u))

    @classmethod
    def from_vector(cls, c) -> ChartCoords:
        """Flat (s_1, ..., s_{4n-1}, u)."""
        arr = np.asarray(c, dtype=float)
        return cls(arr[:-1], float(arr[-1]))

    @classmethod
    def zero(cls, n: int) -> ChartCoords:
        return cls(np.zeros(4 * n - 1), 0.0)

    def as_vector(self) -> np.ndarray:
        return np.append(self.s, self.u)

    def size(self) -> float:
        """|s| + |u|, compared against the chart radius."""
        return float(np.linalg.norm(self.s) + abs(self.u))


def _check_radius(c: ChartCoords, n: int, radius: float) -> None:
    if c.s.shape != (4 * n - 1,):
        raise ValueError(f"Chart coordinate s must have length {4 * n - 1} for n={n}, got {c.s.shape}")
    if c.size() > radius:
        raise ValueError(f"Chart radius exceeded: |s| + |u| = {c.size():.4f} > {radius}")


def chart_to_point(base: CotangentPoint, c: ChartCoords, radius: float = DEFAULT_CHART_RADIUS) -> CotangentPoint:
    n = base.n
    _check_radius(c, n, radius)
    step = expm(combine(c.s, n).matrix)
    lift = GroupElement(base.q.lift.matrix @ step)
    return CotangentPoint(SphereBundlePoint.from_lift(lift, tol=base.q.tol), base.tau * float(np.exp(c.u)))


def point_to_chart(
    base: CotangentPoint,
    p: CotangentPoint,
    radius: float = DEFAULT_CHART_RADIUS,
    tol: float = 1e-9,
) -> ChartCoords:
    """
    Solve exp(S) e_k = e^{i phi} Y e_k (k = 0, 1) for (s, phi), with Y = base.lift^{-1} p.lift.
    Raises ValueError when no chart preimage within tolerance exists.
    """
    n = base.n
    if p.n != n:
        raise ValueError(f"Dimension mismatch: n={n} vs n={p.n}")
    y = group_inverse(base.q.lift.matrix) @ p.q.lift.matrix
    target = y[:, :2]

    def residual(x: np.ndarray) -> np.ndarray:
        moved = expm(combine(x[:-1], n).matrix)[:, :2]
        diff = moved - np.exp(1j * x[-1]) * target
        return np.concatenate([diff.real.ravel(), diff.imag.ravel()])

    x0 = np.zeros(4 * n)
    x0[-1] = -float(np.angle(target[0, 0]))
    sol = least_squares(residual, x0, method="lm", xtol=1e-14, ftol=1e-14, gtol=1e-14)
    misfit = float(np.max(np.abs(sol.fun)))
    logger.debug("point_to_chart: %d evaluations, misfit %.3e", sol.nfev, misfit)
    if misfit > tol:
        raise ValueError(f"Point is outside the chart: inversion misfit {misfit:.3e} > {tol:.1e}")

    coords = ChartCoords(sol.x[:-1], float(np.log(p.tau / base.tau)))
    _check_radius(coords, n, radius)
    return coords


def flow_cotangent(p: CotangentPoint, t: float) -> CotangentPoint:
    """Homogeneous geodesic flow on T*CH^n: the sphere part flows, tau is carried unchanged."""
    return CotangentPoint(geodesic_flow(p.q, t), p.tau)


def cotangent_distance(p1: CotangentPoint, p2: CotangentPoint) -> float:
    """(bundle_distance^2 + (log tau1 - log tau2)^2)^{1/2}."""
    return float(pairwise_cotangent_distances([p1, p2])[0, 1])


def pairwise_cotangent_distances(points: list[CotangentPoint]) -> np.ndarray:
    base = pairwise_bundle_distances([p.q for p in points])
    logs = np.log(np.array([p.tau for p in points], dtype=float))
    return np.sqrt(base ** 2 + (logs[:, None] - logs[None, :]) ** 2)
