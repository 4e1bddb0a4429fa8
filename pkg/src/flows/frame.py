"""
src/flows/frame.py

Tangent vectors of SCH^n in the left-invariant frame (X, V-, V+, W-_j, Z-_j, W+_j, Z+_j)
and their pushforward by the geodesic flow.

A tangent vector at q with coefficients c is the derivative of q.lift . exp(eps sum_i c_i B_i).
Under phi^t the coefficients transform by Ad(exp(-tX)), which is diagonal in the frame:
X -> 1, V- -> e^{2t}, V+ -> e^{-2t}, E- (W-, Z-) -> e^{t}, E+ (W+, Z+) -> e^{-t}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from src.minkowski.groups import group_inverse, subgroup_element
from src.minkowski.lie_algebra import combine, decompose, frame_labels
from src.minkowski.serialize import real_vector_to_json

from .bundle import SphereBundlePoint, flow_time, geodesic_flow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FrameIndices:
    """Coefficient index sets of the frame subspaces."""
    x: int
    v_minus: int
    v_plus: int
    e_minus: tuple[int, ...]
    e_plus: tuple[int, ...]

    @property
    def e_unstable(self) -> tuple[int, ...]:
        """E_u = R V- + E-."""
        return (self.v_minus,) + self.e_minus

    @property
    def e_stable(self) -> tuple[int, ...]:
        """E_s = R V+ + E+."""
        return (self.v_plus,) + self.e_plus

    @property
    def l_unstable(self) -> tuple[int, ...]:
        """L_u = R X + E_u."""
        return (self.x,) + self.e_unstable

    @property
    def l_stable(self) -> tuple[int, ...]:
        """L_s = R X + E_s."""
        return (self.x,) + self.e_stable


@lru_cache(maxsize=None)
def frame_indices(n: int) -> FrameIndices:
    labels = frame_labels(n)
    minus = tuple(i for i, lbl in enumerate(labels) if lbl[:2] in ("W-", "Z-"))
    plus = tuple(i for i, lbl in enumerate(labels) if lbl[:2] in ("W+", "Z+"))
    return FrameIndices(
        x=labels.index("X"),
        v_minus=labels.index("V-"),
        v_plus=labels.index("V+"),
        e_minus=minus,
        e_plus=plus,
    )


@dataclass(frozen=True, eq=False)
class FrameTangent:
    base: SphereBundlePoint
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=float)
        expected = 4 * self.base.n - 1
        if c.shape != (expected,):
            raise ValueError(f"Frame coefficients must have length {expected} for n={self.base.n}, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def unit(cls, base: SphereBundlePoint, label: str) -> FrameTangent:
        labels = frame_labels(base.n)
        if label not in labels:
            raise ValueError(f"Unknown frame label {label!r}; expected one of {labels}")
        c = np.zeros(len(labels))
        c[labels.index(label)] = 1.0
        return cls(base, c)

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "coeffs": real_vector_to_json(self.coeffs)}


def frame_norm(w: FrameTangent) -> float:
    """The frame is orthonormal for the metric, so this is the Euclidean norm of the coefficients."""
    return float(np.linalg.norm(w.coeffs))


def expansion_factors(n: int, t: float) -> np.ndarray:
    """Diagonal of Ad(exp(-tX)) in the frame."""
    idx = frame_indices(n)
    factors = np.ones(4 * n - 1)
    factors[idx.v_minus] = np.exp(2.0 * t)
    factors[idx.v_plus] = np.exp(-2.0 * t)
    factors[list(idx.e_minus)] = np.exp(t)
    factors[list(idx.e_plus)] = np.exp(-t)
    return factors


def pushforward_frame(w: FrameTangent, t: float) -> FrameTangent:
    """d phi^t w: base moves by the geodesic flow, coefficients scale by the expansion factors."""
    return FrameTangent(geodesic_flow(w.base, t), w.coeffs * expansion_factors(w.base.n, flow_time(t)))


def finite_difference_pushforward(w: FrameTangent, t: float, step: float = 1e-6) -> FrameTangent:
    """
    Pushforward measured on curves: flow q.lift exp(+/-eps B) by phi^t, take the central difference
    and pull it back to the algebra with the inverse of the flowed lift.
    """
    if step <= 0:
        raise ValueError(f"Finite-difference step must be positive, got {step}")
    n = w.base.n
    direction = combine(w.coeffs, n).matrix
    flow = subgroup_element("A", n, t=float(t)).matrix
    lift = w.base.lift.matrix

    forward = lift @ expm(step * direction) @ flow
    backward = lift @ expm(-step * direction) @ flow
    center = lift @ flow
    derivative = group_inverse(center) @ (forward - backward) / (2.0 * step)

    coeffs = decompose(derivative, n)[: 4 * n - 1]
    logger.debug("FD pushforward at t=%.3f: coefficient norm %.6e", t, float(np.linalg.norm(coeffs)))
    return FrameTangent(geodesic_flow(w.base, t), coeffs)
