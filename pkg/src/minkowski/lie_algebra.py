"""
src/minkowski/lie_algebra.py

The Lie algebra su(n,1): labeled basis elements, brackets, the slow embeddings kappa_E^{+/-},
and real coordinates with respect to the full basis.

Basis (E_ab is the elementary matrix, indices 0..n, j,k in 2..n):
- X = E_01 + E_10
- V^{+/-} = i(E_00 -/+ E_01 +/- E_10 - E_11)
- W^{+/-}_j = E_0j +/- E_1j + E_j0 -/+ E_j1
- Z^{+/-}_j = i(E_0j +/- E_1j - E_j0 +/- E_j1)
- R_jk = E_jk - E_kj  (j < k)
- R'_jk = i(E_jk + E_kj - delta_jk (E_00 + E_11))  (j <= k)

The ordered frame (X, V-, V+, W-_2..n, Z-_2..n, W+_2..n, Z+_2..n) has 4n-1 elements;
appending the R_jk and R'_jk gives a real basis of dimension n^2 + 2n.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Optional

import numpy as np

from .space import ComplexMatrix, SpaceDim, hermitian_inner, signature_matrix

logger = logging.getLogger(__name__)

Sign = Literal["+", "-"]

# Algebra membership is checked against small-integer matrices, so the default is tight.
ALGEBRA_TOL = 1e-12

LABEL_KINDS = ("X", "V+", "V-", "W+", "W-", "Z+", "Z-", "R", "R'")


def sign_value(sign) -> int:
    """Normalize '+', '-', +1, -1 to +1 / -1."""
    if sign in ("+", 1, +1.0):
        return 1
    if sign in ("-", -1, -1.0):
        return -1
    raise ValueError(f"Sign must be '+' or '-', got {sign!r}")


def sign_symbol(sign) -> Sign:
    return "+" if sign_value(sign) > 0 else "-"


@dataclass(frozen=True, eq=False)
class LieAlgebraElement:
    """
    An (n+1)x(n+1) complex matrix in su(n,1). The label is metadata only.
    """
    matrix: ComplexMatrix
    label: Optional[str] = None

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"Lie algebra element must be a square matrix, got shape {m.shape}")
        SpaceDim(m.shape[0] - 1)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1

    def membership_residual(self) -> float:
        """max(|M*J + JM|, |tr M|)."""
        j = signature_matrix(self.n)
        form = self.matrix.conj().T @ j + j @ self.matrix
        return float(max(np.max(np.abs(form)), abs(np.trace(self.matrix))))

    def validate(self, tol: float = ALGEBRA_TOL) -> LieAlgebraElement:
        residual = self.membership_residual()
        if residual > tol:
            raise ValueError(f"Matrix is not in su({self.n},1): residual {residual:.3e} > {tol:.1e}")
        return self

    def __add__(self, other: LieAlgebraElement) -> LieAlgebraElement:
        _check_same_dim(self, other)
        return LieAlgebraElement(self.matrix + other.matrix, label="generic")

    def __sub__(self, other: LieAlgebraElement) -> LieAlgebraElement:
        _check_same_dim(self, other)
        return LieAlgebraElement(self.matrix - other.matrix, label="generic")

    def scale(self, c: float) -> LieAlgebraElement:
        """Real multiple (the algebra is a real vector space)."""
        return LieAlgebraElement(float(c) * self.matrix, label="generic")

    def allclose(self, other: LieAlgebraElement, atol: float = ALGEBRA_TOL) -> bool:
        _check_same_dim(self, other)
        return bool(np.max(np.abs(self.matrix - other.matrix)) <= atol)


def _check_same_dim(a: LieAlgebraElement, b: LieAlgebraElement) -> None:
    if a.matrix.shape != b.matrix.shape:
        raise ValueError(f"Dimension mismatch: {a.matrix.shape} vs {b.matrix.shape}")


def _elem(size: int, a: int, b: int) -> ComplexMatrix:
    m = np.zeros((size, size), dtype=np.complex128)
    m[a, b] = 1.0
    return m


def basis_element(label: str, n: int, j: Optional[int] = None, k: Optional[int] = None) -> LieAlgebraElement:
    """
    Exact basis matrix for label in {X, V+, V-, W+, W-, Z+, Z-, R, R'}.
    W/Z take an index j in 2..n; R takes j < k, R' takes j <= k (both in 2..n).
    """
    size = SpaceDim(n).size
    E = lambda a, b: _elem(size, a, b)  # noqa: E731

    def check_slow(idx: Optional[int], name: str) -> int:
        if idx is None or not 2 <= idx <= n:
            raise ValueError(f"Index {name}={idx} out of range 2..{n} for label {label}")
        return int(idx)

    if label == "X":
        return LieAlgebraElement(E(0, 1) + E(1, 0), label="X")
    if label in ("V+", "V-"):
        s = sign_value(label[1])
        return LieAlgebraElement(1j * (E(0, 0) - s * E(0, 1) + s * E(1, 0) - E(1, 1)), label=label)
    if label in ("W+", "W-"):
        s = sign_value(label[1])
        jj = check_slow(j, "j")
        m = E(0, jj) + s * E(1, jj) + E(jj, 0) - s * E(jj, 1)
        return LieAlgebraElement(m, label=f"{label}_{jj}")
    if label in ("Z+", "Z-"):
        s = sign_value(label[1])
        jj = check_slow(j, "j")
        m = 1j * (E(0, jj) + s * E(1, jj) - E(jj, 0) + s * E(jj, 1))
        return LieAlgebraElement(m, label=f"{label}_{jj}")
    if label == "R":
        jj, kk = check_slow(j, "j"), check_slow(k, "k")
        if not jj < kk:
            raise ValueError(f"R_jk requires j < k, got j={jj}, k={kk}")
        return LieAlgebraElement(E(jj, kk) - E(kk, jj), label=f"R_{jj}{kk}")
    if label == "R'":
        jj, kk = check_slow(j, "j"), check_slow(k, "k")
        if not jj <= kk:
            raise ValueError(f"R'_jk requires j <= k, got j={jj}, k={kk}")
        m = E(jj, kk) + E(kk, jj)
        if jj == kk:
            m = m - E(0, 0) - E(1, 1)
        return LieAlgebraElement(1j * m, label=f"R'_{jj}{kk}")
    raise ValueError(f"Unknown basis label {label!r}; expected one of {LABEL_KINDS}")


@lru_cache(maxsize=None)
def frame_labels(n: int) -> tuple[str, ...]:
    """Ordered frame labels: X, V-, V+, W-_j, Z-_j, W+_j, Z+_j."""
    SpaceDim(n)
    slow = range(2, n + 1)
    labels = ["X", "V-", "V+"]
    for kind in ("W-", "Z-", "W+", "Z+"):
        labels.extend(f"{kind}_{j}" for j in slow)
    return tuple(labels)


def _from_label(full: str, n: int) -> LieAlgebraElement:
    if full in ("X", "V+", "V-"):
        return basis_element(full, n)
    head, idx = full.split("_")
    if head in ("R", "R'"):
        return basis_element(head, n, int(idx[0]), int(idx[1:]))
    return basis_element(head, n, int(idx))


@lru_cache(maxsize=None)
def _frame_stack(n: int) -> np.ndarray:
    stack = np.stack([_from_label(lbl, n).matrix for lbl in frame_labels(n)])
    stack.setflags(write=False)
    return stack


def frame_basis(n: int) -> list[LieAlgebraElement]:
    """The 4n-1 frame elements in frame order."""
    return [_from_label(lbl, n) for lbl in frame_labels(n)]


@lru_cache(maxsize=None)
def algebra_labels(n: int) -> tuple[str, ...]:
    labels = list(frame_labels(n))
    slow = range(2, n + 1)
    labels.extend(f"R_{j}{k}" for j in slow for k in slow if j < k)
    labels.extend(f"R'_{j}{k}" for j in slow for k in slow if j <= k)
    return tuple(labels)


def algebra_basis(n: int) -> list[LieAlgebraElement]:
    """Full real basis of su(n,1): frame elements, then R_jk, then R'_jk."""
    return [_from_label(lbl, n) for lbl in algebra_labels(n)]


@lru_cache(maxsize=None)
def _real_design(n: int) -> np.ndarray:
    """Columns are the real-vectorized basis matrices (Re block stacked over Im block)."""
    mats = np.stack([_from_label(lbl, n).matrix for lbl in algebra_labels(n)])
    flat = mats.reshape(len(mats), -1)
    design = np.concatenate([flat.real, flat.imag], axis=1).T
    design.setflags(write=False)
    return design


def decompose(element: LieAlgebraElement | ComplexMatrix, n: Optional[int] = None) -> np.ndarray:
    """
    Real coordinates of an algebra element in algebra_basis(n).
    Matrices outside the algebra are projected in the least-squares sense.
    """
    m = element.matrix if isinstance(element, LieAlgebraElement) else np.asarray(element, dtype=np.complex128)
    n = m.shape[0] - 1 if n is None else n
    design = _real_design(n)
    rhs = np.concatenate([m.real.ravel(), m.imag.ravel()])
    coeffs, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    return coeffs


def combine(coeffs, n: int, frame_only: bool = True) -> LieAlgebraElement:
    """Inverse of decompose: sum_i c_i B_i over the frame (or the full basis)."""
    c = np.asarray(coeffs, dtype=float)
    if frame_only:
        stack = _frame_stack(n)
    else:
        stack = np.stack([_from_label(lbl, n).matrix for lbl in algebra_labels(n)])
    if c.shape != (len(stack),):
        raise ValueError(f"Expected {len(stack)} coefficients for n={n}, got shape {c.shape}")
    return LieAlgebraElement(np.tensordot(c, stack, axes=1), label="generic")


def bracket(a: LieAlgebraElement, b: LieAlgebraElement) -> LieAlgebraElement:
    """[A, B] = AB - BA."""
    _check_same_dim(a, b)
    return LieAlgebraElement(a.matrix @ b.matrix - b.matrix @ a.matrix, label="generic")


def slow_vector(w, n: int) -> np.ndarray:
    """Validate a SlowVector: complex array of length n-1 with finite entries."""
    vec = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    dim = SpaceDim(n)
    if vec.shape != (dim.slow_dim,):
        raise ValueError(f"Slow vector must have length {dim.slow_dim} for n={n}, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("Slow vector has non-finite entries")
    return vec


def kappa_E(sign, w, n: Optional[int] = None) -> LieAlgebraElement:
    """
    kappa^{+/-}(w) = sum_j Re(w_j) W^{+/-}_j - Im(w_j) Z^{+/-}_j.

    Closed form: the (0,j) and (1,j) entries are conj(w_j) and +/-conj(w_j);
    the (j,0) and (j,1) entries are w_j and -/+w_j.
    """
    vec = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    n = vec.shape[0] + 1 if n is None else n
    vec = slow_vector(vec, n)
    s = sign_value(sign)
    m = np.zeros((n + 1, n + 1), dtype=np.complex128)
    m[0, 2:] = np.conj(vec)
    m[1, 2:] = s * np.conj(vec)
    m[2:, 0] = vec
    m[2:, 1] = -s * vec
    return LieAlgebraElement(m, label=f"kappa{sign_symbol(sign)}")


def stun_matrix_action(sign, c: float, w, z) -> np.ndarray:
    """
    Closed form of (cV^{+/-} + kappa^{+/-}(w)) z:
        (i c a + <z', w>) (e_0 +/- e_1) + a (0, 0, w),   a = z_0 -/+ z_1,
    where z' = (z_2, ..., z_n) and <.,.> is the Hermitian product.
    """
    zv = np.asarray(z, dtype=np.complex128)
    s = sign_value(sign)
    wv = slow_vector(w, zv.shape[0] - 1)
    a = zv[0] - s * zv[1]
    lead = 1j * float(c) * a + hermitian_inner(zv[2:], wv)
    out = np.zeros_like(zv)
    out[0] = lead
    out[1] = s * lead
    out[2:] = a * wv
    return out


def random_algebra_element(n: int, rng: np.random.Generator, scale: float = 1.0) -> LieAlgebraElement:
    """Seeded random element: Gaussian coordinates in the full basis."""
    coeffs = rng.normal(scale=scale, size=len(algebra_labels(n)))
    return combine(coeffs, n, frame_only=False)


def random_slow_vector(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1))
