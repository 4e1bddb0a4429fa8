"""
src/fup/discrete.py

Discrete FUP: the norm of 1_{Omega-} F_N 1_{Omega+} for the unitary DFT
F_N[j, k] = N^{-1/2} exp(-2 pi i j k / N).

Small N uses the SVD of the restricted matrix; large N uses power iteration on M*M
applied through scipy.fft (norm="ortho").
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np
from scipy import fft
from scipy.linalg import svdvals

from .porous import PorousSet

logger = logging.getLogger(__name__)

NormMethod = Literal["dense-svd", "power-iteration"]

DENSE_SVD_MAX_N = 4096
POWER_ITERATION_CAP = 10_000
RESIDUAL_TOL = 1e-8
RAYLEIGH_TOL = 1e-10
MAX_TENSOR_ENTRIES = 1 << 24


@dataclass(frozen=True, eq=False)
class DiscreteSet:
    N: int
    mask: np.ndarray

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"Grid size N must be >= 1, got {self.N}")
        mask = np.asarray(self.mask, dtype=bool)
        if mask.shape != (self.N,):
            raise ValueError(f"Mask must have shape ({self.N},), got {mask.shape}")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_indices(cls, N: int, indices) -> DiscreteSet:
        mask = np.zeros(N, dtype=bool)
        idx = np.asarray(list(indices), dtype=int)
        if idx.size and (idx.min() < 0 or idx.max() >= N):
            raise ValueError(f"Indices must lie in 0..{N - 1}")
        mask[idx] = True
        return cls(N, mask)

    @classmethod
    def full(cls, N: int) -> DiscreteSet:
        return cls(N, np.ones(N, dtype=bool))

    @classmethod
    def from_porous_set(cls, omega: PorousSet, N: int) -> DiscreteSet:
        """Cells j in 0..N-1 whose midpoint (j + 1/2)/N lies in Omega (Omega taken in [0, 1])."""
        mids = (np.arange(N) + 0.5) / N
        return cls(N, omega.contains(mids))

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    def to_porous_set(self) -> PorousSet:
        """Union of the cells [j/N, (j+1)/N], adjacent cells merged."""
        idx = self.indices
        if not idx.size:
            return PorousSet.empty()
        return PorousSet.from_unsorted(np.column_stack([idx, idx + 1]) / self.N)


def cantor_discrete(depth: int, base: int = 3, kept_digits: Sequence[int] = (0, 2)) -> DiscreteSet:
    """Indices in 0..base^depth - 1 whose base-ary digits all lie in kept_digits."""
    if depth < 1:
        raise ValueError(f"Cantor depth must be >= 1, got {depth}")
    kept = np.array(sorted(set(kept_digits)), dtype=np.int64)
    if not kept.size or kept.min() < 0 or kept.max() >= base:
        raise ValueError(f"Kept digits must lie in 0..{base - 1}, got {kept_digits}")
    idx = np.zeros(1, dtype=np.int64)
    for _ in range(depth):
        idx = (idx[:, None] * base + kept[None, :]).ravel()
    return DiscreteSet.from_indices(base ** depth, idx)


@dataclass(frozen=True)
class NormResult:
    value: float
    method: NormMethod
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True


def frobenius_bound(omega_minus: DiscreteSet, omega_plus: DiscreteSet) -> float:
    """min(1, sqrt(|Omega-| |Omega+| / N)): Hilbert-Schmidt norm of the restricted DFT."""
    n = omega_minus.N
    return float(min(1.0, np.sqrt(omega_minus.size * omega_plus.size / n)))


def _check_pair(omega_minus: DiscreteSet, omega_plus: DiscreteSet) -> int:
    if omega_minus.N != omega_plus.N:
        raise ValueError(f"Grid sizes differ: {omega_minus.N} vs {omega_plus.N}")
    return omega_minus.N


def dft_submatrix(rows: np.ndarray, cols: np.ndarray, n: int) -> np.ndarray:
    phase = np.outer(rows.astype(np.int64), cols.astype(np.int64)) % n
    return np.exp(-2j * np.pi * phase / n) / np.sqrt(n)


def _dense_norm(rows: np.ndarray, cols: np.ndarray, n: int) -> NormResult:
    value = float(svdvals(dft_submatrix(rows, cols, n))[0])
    return NormResult(value=value, method="dense-svd")


def _power_norm(rows: np.ndarray, cols: np.ndarray, n: int, cap: int) -> NormResult:
    def apply(x: np.ndarray) -> np.ndarray:
        full = np.zeros(n, dtype=complex)
        full[cols] = x
        image = fft.fft(full, norm="ortho")
        back = np.zeros(n, dtype=complex)
        back[rows] = image[rows]
        return fft.ifft(back, norm="ortho")[cols]

    x = np.ones(cols.size, dtype=complex) / np.sqrt(cols.size)
    previous = 0.0
    residual = np.inf
    for it in range(1, cap + 1):
        y = apply(x)
        rayleigh = float(np.vdot(x, y).real)
        scale = float(np.linalg.norm(y))
        if scale == 0.0:
            return NormResult(value=0.0, method="power-iteration", iterations=it, residual=0.0)
        residual = float(np.linalg.norm(y - rayleigh * x)) / max(rayleigh, np.finfo(float).tiny)
        if residual <= RESIDUAL_TOL and abs(rayleigh - previous) <= RAYLEIGH_TOL * rayleigh:
            return NormResult(
                value=float(np.sqrt(max(rayleigh, 0.0))),
                method="power-iteration",
                iterations=it,
                residual=residual,
            )
        previous = rayleigh
        x = y / scale

    logger.warning("Power iteration did not converge in %d iterations (N=%d, residual %.3e)", cap, n, residual)
    return NormResult(
        value=float(np.sqrt(max(previous, 0.0))),
        method="power-iteration",
        iterations=cap,
        residual=residual,
        converged=False,
    )


def discrete_norm(
    omega_minus: DiscreteSet,
    omega_plus: DiscreteSet,
    method: Optional[NormMethod] = None,
    dense_max_n: int = DENSE_SVD_MAX_N,
    cap: int = POWER_ITERATION_CAP,
) -> NormResult:
    """
    ||1_{Omega-} F_N 1_{Omega+}||. method=None picks dense SVD for N <= dense_max_n.
    """
    n = _check_pair(omega_minus, omega_plus)
    rows, cols = omega_minus.indices, omega_plus.indices
    if not rows.size or not cols.size:
        return NormResult(value=0.0, method=method or "dense-svd")
    chosen = method or ("dense-svd" if n <= dense_max_n else "power-iteration")
    if chosen == "dense-svd":
        result = _dense_norm(rows, cols, n)
    elif chosen == "power-iteration":
        result = _power_norm(rows, cols, n, cap)
    else:
        raise ValueError(f"Unknown norm method {chosen!r}")
    logger.debug("discrete_norm N=%d |-|=%d |+|=%d: %.6f (%s)", n, rows.size, cols.size, result.value, chosen)
    return result


def norm_sweep(
    pairs: Sequence[tuple[DiscreteSet, DiscreteSet]],
    workers: int = 1,
    **kwargs,
) -> list[NormResult]:
    """discrete_norm over independent pairs; results are returned in input order."""
    if workers <= 1 or len(pairs) <= 1:
        return [discrete_norm(m, p, **kwargs) for m, p in pairs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda pair: discrete_norm(pair[0], pair[1], **kwargs), pairs))


@dataclass(frozen=True)
class TensorFactorCheck:
    norm_1d: float
    norm_2d: float
    difference: float
    agrees: bool


def tensor_factor_norms(omega_minus: DiscreteSet, omega_plus: DiscreteSet, transverse_dim: int) -> tuple[float, float]:
    """
    Norms of the 1D operator and of the 2D DFT on an N x T grid restricted to
    {eta_1 in Omega-} x {y_1 in Omega+} with the transverse coordinate unconstrained.
    """
    n = _check_pair(omega_minus, omega_plus)
    t = int(transverse_dim)
    if t < 1:
        raise ValueError(f"Transverse dimension must be >= 1, got {t}")
    if (n * t) ** 2 > MAX_TENSOR_ENTRIES:
        raise ValueError(f"2D operator would have {(n * t) ** 2} entries (limit {MAX_TENSOR_ENTRIES})")

    one_d = discrete_norm(omega_minus, omega_plus, method="dense-svd").value
    f_n = dft_submatrix(np.arange(n), np.arange(n), n)
    f_t = dft_submatrix(np.arange(t), np.arange(t), t)
    f_2 = np.kron(f_n, f_t)
    rows = np.repeat(omega_minus.mask, t)
    cols = np.repeat(omega_plus.mask, t)
    if not rows.any() or not cols.any():
        return one_d, 0.0
    two_d = float(svdvals(f_2[np.ix_(rows, cols)])[0])
    return one_d, two_d


def tensor_factor_check(
    omega_minus: DiscreteSet,
    omega_plus: DiscreteSet,
    transverse_dim: int,
    tol: float = 1e-10,
) -> TensorFactorCheck:
    """Unconstrained transverse directions contribute a unitary factor, so both norms agree."""
    one_d, two_d = tensor_factor_norms(omega_minus, omega_plus, transverse_dim)
    diff = abs(one_d - two_d)
    return TensorFactorCheck(norm_1d=one_d, norm_2d=two_d, difference=diff, agrees=diff <= tol)
