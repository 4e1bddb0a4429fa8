"""
src/symplectic/form.py

The canonical symplectic form of T*CH^n in exponential chart coordinates.

Chart basis order: the 4n-1 frame directions, then d/du (u = log tau).
Two ways to evaluate omega at the chart origin:
- "fd": tautological form alpha(W) = tau Re<dz(W), v> by central differences through
  chart_to_point, then omega = d alpha by a second level of central differences;
- "exact": left-invariant closed form from the Maurer-Cartan equation,
  omega(B_a, B_b) = -tau Re([B_a, B_b]_{10}),  omega(d/du, B_b) = tau Re((B_b)_{10}).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from src.flows.frame import frame_indices
from src.minkowski.lie_algebra import frame_basis
from src.minkowski.space import minkowski_inner

from .chart import ChartCoords, CotangentPoint, chart_to_point

logger = logging.getLogger(__name__)

FormMethod = Literal["fd", "exact"]

ANTISYMMETRY_TOL = 1e-9
NONDEGENERACY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SymplecticMatrixAt:
    base: CotangentPoint
    omega: np.ndarray
    alpha: np.ndarray
    method: FormMethod = "fd"
    fd_step: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        size = self.base.chart_dim
        if self.omega.shape != (size, size) or self.alpha.shape != (size,):
            raise ValueError(f"Form arrays must have sizes ({size},{size}) and ({size},)")
        asym = float(np.max(np.abs(self.omega + self.omega.T)))
        if asym > ANTISYMMETRY_TOL:
            raise ValueError(f"omega is not antisymmetric: residual {asym:.3e}")
        smallest = float(np.linalg.svd(self.omega, compute_uv=False)[-1])
        if smallest < NONDEGENERACY_TOL * max(1.0, float(np.max(np.abs(self.omega)))):
            raise ValueError(
                f"omega is degenerate (smallest singular value {smallest:.3e}); "
                "check the chart radius and the finite-difference step"
            )

    def pair(self, a: np.ndarray, b: np.ndarray) -> float:
        """omega(a, b) for chart vectors a, b."""
        return float(a @ self.omega @ b)


def u_index(n: int) -> int:
    return 4 * n - 1


def _alpha_at(base: CotangentPoint, c: np.ndarray, h: float) -> np.ndarray:
    """Tautological form components alpha_a(c), a over the chart basis."""
    n = base.n
    size = 4 * n
    here = chart_to_point(base, ChartCoords.from_vector(c))
    out = np.zeros(size)
    for a in range(size - 1):
        shift = np.zeros(size)
        shift[a] = h
        z_plus = chart_to_point(base, ChartCoords.from_vector(c + shift)).q.z
        z_minus = chart_to_point(base, ChartCoords.from_vector(c - shift)).q.z
        dz = (z_plus - z_minus) / (2.0 * h)
        out[a] = here.tau * minkowski_inner(dz, here.q.v).real
    # z does not depend on u, so alpha_u vanishes identically.
    return out


def tautological_form(base: CotangentPoint, fd_step: float = 1e-4) -> np.ndarray:
    return _alpha_at(base, np.zeros(base.chart_dim), fd_step)


def _fd_omega(base: CotangentPoint, h: float) -> tuple[np.ndarray, np.ndarray]:
    size = base.chart_dim
    zero = np.zeros(size)
    deriv = np.zeros((size, size))
    for a in range(size):
        shift = np.zeros(size)
        shift[a] = h
        deriv[a] = (_alpha_at(base, zero + shift, h) - _alpha_at(base, zero - shift, h)) / (2.0 * h)
    omega = deriv - deriv.T
    return omega, _alpha_at(base, zero, h)


def exact_symplectic_form(base: CotangentPoint) -> SymplecticMatrixAt:
    n = base.n
    mats = np.stack([b.matrix for b in frame_basis(n)])
    tau = base.tau
    k = len(mats)
    omega = np.zeros((4 * n, 4 * n))
    for a in range(k):
        for b in range(a + 1, k):
            comm = mats[a] @ mats[b] - mats[b] @ mats[a]
            omega[a, b] = -tau * comm[1, 0].real
            omega[b, a] = -omega[a, b]
    u = u_index(n)
    omega[u, :k] = tau * mats[:, 1, 0].real
    omega[:k, u] = -omega[u, :k]
    alpha = np.zeros(4 * n)
    alpha[:k] = tau * mats[:, 1, 0].real
    return SymplecticMatrixAt(base=base, omega=omega, alpha=alpha, method="exact")


def symplectic_form_at(base: CotangentPoint, fd_step: float = 1e-4, method: FormMethod = "fd") -> SymplecticMatrixAt:
    """omega (and alpha) at chart coordinate 0 around base."""
    if method == "exact":
        return exact_symplectic_form(base)
    if method != "fd":
        raise ValueError(f"Unknown form method {method!r}; expected 'fd' or 'exact'")
    if not 1e-6 <= fd_step <= 1e-3:
        raise ValueError(f"fd_step must lie in [1e-6, 1e-3], got {fd_step}")
    omega, alpha = _fd_omega(base, fd_step)
    asym = float(np.max(np.abs(omega + omega.T)))
    logger.debug("FD symplectic form (n=%d, step=%.1e): antisymmetry residual %.2e", base.n, fd_step, asym)
    return SymplecticMatrixAt(base=base, omega=omega, alpha=alpha, method="fd", fd_step=fd_step)


def pairing_blocks(n: int) -> dict[str, tuple[tuple[int, ...], tuple[int, ...]]]:
    """Index blocks on which omega must vanish."""
    idx = frame_indices(n)
    u = u_index(n)
    return {
        "dilation_flow_vs_stun": ((u, idx.x), idx.e_unstable + idx.e_stable),
        "E_u_vs_E_u": (idx.e_unstable, idx.e_unstable),
        "E_s_vs_E_s": (idx.e_stable, idx.e_stable),
        "V+_vs_E-": ((idx.v_plus,), idx.e_minus),
        "V-_vs_E+": ((idx.v_minus,), idx.e_plus),
    }


def _block_max(omega: np.ndarray, rows, cols) -> float:
    return float(np.max(np.abs(omega[np.ix_(list(rows), list(cols))])))


def pairing_residuals(form: SymplecticMatrixAt) -> dict[str, float]:
    return {name: _block_max(form.omega, r, c) for name, (r, c) in pairing_blocks(form.base.n).items()}


def lagrangian_residuals(form: SymplecticMatrixAt) -> dict[str, float]:
    """max |omega| over L_u x L_u and L_s x L_s (each of dimension 2n)."""
    idx = frame_indices(form.base.n)
    return {
        "L_u": _block_max(form.omega, idx.l_unstable, idx.l_unstable),
        "L_s": _block_max(form.omega, idx.l_stable, idx.l_stable),
    }


def dilation_flow_pairing(form: SymplecticMatrixAt) -> float:
    """omega(d/du, X): nonzero, equal to tau."""
    return float(form.omega[u_index(form.base.n), frame_indices(form.base.n).x])


def fd_convergence_ratio(base: CotangentPoint, step: float = 1e-3) -> float:
    """
    err(step) / err(step / 2) with err = max |omega_fd - omega_exact|; about 4 for a second-order scheme.
    """
    exact = exact_symplectic_form(base).omega
    coarse = float(np.max(np.abs(symplectic_form_at(base, step).omega - exact)))
    fine = float(np.max(np.abs(symplectic_form_at(base, step / 2.0).omega - exact)))
    if fine == 0.0:
        return float("inf") if coarse > 0 else float("nan")
    ratio = coarse / fine
    logger.debug("FD convergence: err(%.1e)=%.3e, err(%.1e)=%.3e, ratio %.3f", step, coarse, step / 2, fine, ratio)
    return ratio
