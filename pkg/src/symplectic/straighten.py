"""
src/symplectic/straighten.py

Linear straightening at a point: a symplectic basis e_1..e_2n, f_1..f_2n of the chart tangent space with
    e_1 = V+,  e_2..e_{2n-1} = basis of E+,  e_2n = X,
    f_1 in R V-,  f_2..f_{2n-1} in E- dual to E+,  f_2n in R d/du,
and the map L = P^{-1} (P = [e | f]) sending e_j to d/dy_j and f_k to d/deta_k.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.flows.frame import frame_indices

from .chart import CotangentPoint
from .form import FormMethod, SymplecticMatrixAt, symplectic_form_at, u_index

logger = logging.getLogger(__name__)


def standard_symplectic_matrix(dim: int) -> np.ndarray:
    """J_std in (y, eta) coordinates: omega(d/deta_k, d/dy_j) = delta_jk."""
    half = dim // 2
    eye = np.eye(half)
    zero = np.zeros((half, half))
    return np.block([[zero, -eye], [eye, zero]])


@dataclass(frozen=True, eq=False)
class StraightenMap:
    base: CotangentPoint
    L: np.ndarray
    P: np.ndarray
    form: SymplecticMatrixAt
    pairing_condition: float

    @property
    def n(self) -> int:
        return self.base.n

    def to_straight(self, chart_vec) -> np.ndarray:
        """Chart vector -> (y, eta)."""
        return self.L @ np.asarray(chart_vec, dtype=float)

    def to_chart(self, straight_vec) -> np.ndarray:
        """(y, eta) -> chart vector."""
        return self.P @ np.asarray(straight_vec, dtype=float)

    def symplectic_residual(self) -> float:
        """max |P^T omega P - J_std|: the pullback of the chart form in (y, eta) is canonical."""
        j_std = standard_symplectic_matrix(4 * self.n)
        return float(np.max(np.abs(self.P.T @ self.form.omega @ self.P - j_std)))


def _unit(size: int, index: int) -> np.ndarray:
    e = np.zeros(size)
    e[index] = 1.0
    return e


def straighten(base: CotangentPoint, method: FormMethod = "exact", fd_step: float = 1e-4) -> StraightenMap:
    n = base.n
    size = 4 * n
    form = symplectic_form_at(base, fd_step=fd_step, method=method)
    omega = form.omega
    idx = frame_indices(n)
    u = u_index(n)

    e_cols = [_unit(size, idx.v_plus)]
    e_cols += [_unit(size, i) for i in idx.e_plus]
    e_cols.append(_unit(size, idx.x))

    f_cols = [_unit(size, idx.v_minus) / omega[idx.v_minus, idx.v_plus]]

    # Solve omega(f_j, e_k) = delta_jk on E- x E+.
    pairing = omega[np.ix_(list(idx.e_minus), list(idx.e_plus))]
    condition = float(np.linalg.cond(pairing))
    if not np.isfinite(condition) or condition > 1e12:
        raise ValueError(f"E- x E+ pairing system is singular (condition number {condition:.3e})")
    coeffs = np.linalg.inv(pairing)
    for row in coeffs:
        f = np.zeros(size)
        f[list(idx.e_minus)] = row
        f_cols.append(f)

    f_cols.append(_unit(size, u) / omega[u, idx.x])

    p = np.column_stack(e_cols + f_cols)
    l_map = np.linalg.inv(p)
    smap = StraightenMap(base=base, L=l_map, P=p, form=form, pairing_condition=condition)
    logger.debug(
        "Straightened at tau=%.3f (n=%d): pairing condition %.3e, symplectic residual %.2e",
        base.tau, n, condition, smap.symplectic_residual(),
    )
    return smap


def image_residuals(smap: StraightenMap) -> dict[str, float]:
    """
    Off-support mass of L applied to each distinguished direction:
    V+ -> R dy_1, V- -> R deta_1, E+ -> span dy_2..dy_{2n-1}, E- -> span deta_2..deta_{2n-1},
    X -> R dy_2n, d/du -> R deta_2n, and the complements of V+/V- -> ker deta_1 / ker dy_1 respectively.
    """
    n = smap.n
    size = 4 * n
    idx = frame_indices(n)
    u = u_index(n)
    y = lambda k: k - 1  # noqa: E731
    eta = lambda k: 2 * n + k - 1  # noqa: E731

    def off_support(chart_indices, allowed) -> float:
        images = smap.L[:, list(chart_indices)]
        mask = np.ones(size, dtype=bool)
        mask[list(allowed)] = False
        return float(np.max(np.abs(images[mask]))) if mask.any() else 0.0

    def killed_by(chart_indices, coordinate: int) -> float:
        return float(np.max(np.abs(smap.L[coordinate, list(chart_indices)])))

    slow = list(range(2, 2 * n))
    # V_perp^{+/-} = R d/du + R X + R V^{-/+} + E+ + E-.
    v_perp_plus = (u, idx.x, idx.v_minus) + idx.e_plus + idx.e_minus
    v_perp_minus = (u, idx.x, idx.v_plus) + idx.e_plus + idx.e_minus

    return {
        "V+_to_y1": off_support([idx.v_plus], [y(1)]),
        "V-_to_eta1": off_support([idx.v_minus], [eta(1)]),
        "E+_to_y_slow": off_support(idx.e_plus, [y(k) for k in slow]),
        "E-_to_eta_slow": off_support(idx.e_minus, [eta(k) for k in slow]),
        "X_to_y2n": off_support([idx.x], [y(2 * n)]),
        "dilation_to_eta2n": off_support([u], [eta(2 * n)]),
        "V_perp+_to_ker_dy1": killed_by(v_perp_plus, y(1)),
        "V_perp-_to_ker_deta1": killed_by(v_perp_minus, eta(1)),
    }
