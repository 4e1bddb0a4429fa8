"""
src/flows/bundle.py

The sphere bundle SCH^n as pairs (z, v) with an explicit SU(n,1) lift g (g e_0 = z, g e_1 = v),
the geodesic and horocycle flows as right translations of the lift, and a U(1)-minimized
ambient distance used as a computable proxy for the frame metric.

Lifts are never quotiented: every quantity computed here is equivariant under the R subgroup.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.minkowski.groups import GroupElement, group_inverse, rotation_for_phase, subgroup_element
from src.minkowski.lie_algebra import sign_symbol
from src.minkowski.serialize import complex_matrix_from_json, complex_matrix_to_json, complex_vector_to_json
from src.minkowski.space import MinkVector, minkowski_inner

logger = logging.getLogger(__name__)

POINT_TOL = 1e-10

# The raw U(1)-minimized distance moves at speed sqrt(2) along X; this factor restores unit speed.
DISTANCE_CALIBRATION = 1.0 / np.sqrt(2.0)


def flow_time(t) -> float:
    """Validate a FlowTime: a finite real number."""
    value = float(t)
    if not np.isfinite(value):
        raise ValueError(f"Flow time must be finite, got {t!r}")
    return value


@dataclass(frozen=True, eq=False)
class SphereBundlePoint:
    """
    A point (z, v) of SCH^n with <z,z> = -1, <z,v> = 0, <v,v> = 1 and a lift g with g e_0 = z, g e_1 = v.
    """
    z: MinkVector
    v: MinkVector
    lift: GroupElement
    tol: float = POINT_TOL

    def __post_init__(self) -> None:
        z = np.asarray(self.z, dtype=np.complex128)
        v = np.asarray(self.v, dtype=np.complex128)
        size = self.lift.n + 1
        if z.shape != (size,) or v.shape != (size,):
            raise ValueError(f"Point vectors must have length {size}, got {z.shape} and {v.shape}")

        # Relative tolerances: ambient entries grow like cosh(t) along the flow.
        scale = max(1.0, float(np.max(np.abs(z))), float(np.max(np.abs(v)))) ** 2
        residuals = {
            "<z,z>+1": abs(minkowski_inner(z, z) + 1.0),
            "<z,v>": abs(minkowski_inner(z, v)),
            "<v,v>-1": abs(minkowski_inner(v, v) - 1.0),
        }
        bad = {k: r for k, r in residuals.items() if r > self.tol * scale}
        if bad:
            raise ValueError(f"Not a sphere bundle point: {bad}")
        lift_res = max(
            float(np.max(np.abs(self.lift.matrix[:, 0] - z))),
            float(np.max(np.abs(self.lift.matrix[:, 1] - v))),
        )
        if lift_res > self.tol * np.sqrt(scale):
            raise ValueError(f"Lift does not map (e_0, e_1) to (z, v): residual {lift_res:.3e}")
        z.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.lift.n

    @classmethod
    def from_lift(cls, g: GroupElement, tol: float = POINT_TOL) -> SphereBundlePoint:
        return cls(z=g.matrix[:, 0].copy(), v=g.matrix[:, 1].copy(), lift=g, tol=tol)

    def to_json(self) -> dict:
        return {
            "z": complex_vector_to_json(self.z),
            "v": complex_vector_to_json(self.v),
            "lift": complex_matrix_to_json(self.lift.matrix),
        }

    @classmethod
    def from_json(cls, data: dict) -> SphereBundlePoint:
        return cls.from_lift(GroupElement(complex_matrix_from_json(data["lift"])))


def base_point(n: int) -> SphereBundlePoint:
    """(e_0, e_1) with identity lift."""
    return SphereBundlePoint.from_lift(GroupElement.identity(n))


def act(g: GroupElement, q: SphereBundlePoint) -> SphereBundlePoint:
    """Left action g.(z, v) = (gz, gv); the lift becomes g . lift."""
    return SphereBundlePoint.from_lift(g @ q.lift, tol=q.tol)


def right_translate(q: SphereBundlePoint, h: GroupElement) -> SphereBundlePoint:
    return SphereBundlePoint.from_lift(q.lift @ h, tol=q.tol)


def geodesic_flow(q: SphereBundlePoint, t: float) -> SphereBundlePoint:
    """phi^t: right translation of the lift by exp(tX)."""
    return right_translate(q, subgroup_element("A", q.n, t=flow_time(t)))


def horocycle_flow(q: SphereBundlePoint, s: float, sign) -> SphereBundlePoint:
    """Right translation of the lift by exp(sV^{+/-})."""
    return right_translate(q, subgroup_element(f"U{sign_symbol(sign)}", q.n, s=flow_time(s)))


def phase_rotate(q: SphereBundlePoint, theta: float) -> SphereBundlePoint:
    """(z, v) -> e^{i theta}(z, v), realized by an R element so the lift stays in SU(n,1)."""
    return right_translate(q, rotation_for_phase(theta, q.n))


def recenter(points: list[SphereBundlePoint], center: SphereBundlePoint) -> list[SphereBundlePoint]:
    """Apply the isometry center.lift^{-1} to every point (moves center to the base point)."""
    g_inv = GroupElement(group_inverse(center.lift.matrix))
    return [act(g_inv, p) for p in points]


def bundle_distance(q1: SphereBundlePoint, q2: SphereBundlePoint) -> float:
    """
    min over theta of (|z1 - e^{i theta} z2|^2 + |v1 - e^{i theta} v2|^2)^{1/2} with Euclidean norms,
    times DISTANCE_CALIBRATION. Closed form: the optimal phase aligns with s = z1.conj(z2) + v1.conj(v2).
    """
    if q1.n != q2.n:
        raise ValueError(f"Dimension mismatch: n={q1.n} vs n={q2.n}")
    total = (
        np.vdot(q1.z, q1.z).real + np.vdot(q2.z, q2.z).real
        + np.vdot(q1.v, q1.v).real + np.vdot(q2.v, q2.v).real
    )
    s = np.vdot(q2.z, q1.z) + np.vdot(q2.v, q1.v)
    return float(DISTANCE_CALIBRATION * np.sqrt(max(0.0, total - 2.0 * abs(s))))


def recentered_distance(q1: SphereBundlePoint, q2: SphereBundlePoint) -> float:
    """
    bundle_distance after the isometry q1.lift^{-1}, which moves q1 to the base point.
    Invariant under act(g, .) applied to both points, unlike the raw ambient distance.
    """
    p1, p2 = recenter([q1, q2], q1)
    return bundle_distance(p1, p2)


def pairwise_bundle_distances(points: list[SphereBundlePoint]) -> np.ndarray:
    """Vectorized bundle_distance matrix."""
    if not points:
        return np.zeros((0, 0))
    zs = np.stack([p.z for p in points])
    vs = np.stack([p.v for p in points])
    norms = np.sum(np.abs(zs) ** 2, axis=1) + np.sum(np.abs(vs) ** 2, axis=1)
    cross = zs @ zs.conj().T + vs @ vs.conj().T
    sq = norms[:, None] + norms[None, :] - 2.0 * np.abs(cross)
    return DISTANCE_CALIBRATION * np.sqrt(np.clip(sq, 0.0, None))


def distance_calibration(q: SphereBundlePoint, t: float = 1e-3) -> float:
    """Measured ratio d(q, phi^t q) / t in the recentered frame; close to 1 for small t at every q."""
    if t <= 0:
        raise ValueError(f"Calibration time must be positive, got {t}")
    ratio = recentered_distance(q, geodesic_flow(q, t)) / t
    logger.debug("Distance calibration at t=%.1e: %.6f", t, ratio)
    return ratio
