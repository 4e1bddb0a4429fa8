"""
src/minkowski/groups.py

G = SU(n,1) as a matrix group: membership checks, the generic and the nilpotent exponential,
the one-parameter and compact subgroups (U+, U-, A, K, R, W_k, N) and the X(W_l, U+) membership test.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .lie_algebra import (
    LieAlgebraElement,
    basis_element,
    kappa_E,
    sign_symbol,
)
from .space import ComplexMatrix, SpaceDim, signature_matrix

logger = logging.getLogger(__name__)

GROUP_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GroupElement:
    """
    An element of SU(n,1): M*JM = J and det M = 1, both checked on construction.
    """
    matrix: ComplexMatrix
    tol: float = GROUP_TOL

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"Group element must be a square matrix, got shape {m.shape}")
        SpaceDim(m.shape[0] - 1)
        form_res, det_res = membership_residuals(m)
        if form_res > self.tol or det_res > self.tol:
            raise ValueError(
                f"Matrix is not in SU({m.shape[0] - 1},1): "
                f"form residual {form_res:.3e}, determinant residual {det_res:.3e} (tol {self.tol:.1e})"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1

    def __matmul__(self, other: GroupElement) -> GroupElement:
        if self.matrix.shape != other.matrix.shape:
            raise ValueError(f"Dimension mismatch: {self.matrix.shape} vs {other.matrix.shape}")
        return GroupElement(self.matrix @ other.matrix, tol=max(self.tol, other.tol))

    def inverse(self) -> GroupElement:
        """M^{-1} = J M* J, exact for form-preserving matrices."""
        return GroupElement(group_inverse(self.matrix), tol=self.tol)

    @classmethod
    def identity(cls, n: int) -> GroupElement:
        return cls(np.eye(SpaceDim(n).size, dtype=np.complex128))


def membership_residuals(m: ComplexMatrix) -> tuple[float, float]:
    """(max |M*JM - J|, |det M - 1|)."""
    j = signature_matrix(m.shape[0] - 1)
    form = m.conj().T @ j @ m - j
    return float(np.max(np.abs(form))), float(abs(np.linalg.det(m) - 1.0))


def group_inverse(m: ComplexMatrix) -> ComplexMatrix:
    j = signature_matrix(m.shape[0] - 1)
    return j @ m.conj().T @ j


def exp_algebra(element: LieAlgebraElement, tol: float = GROUP_TOL) -> GroupElement:
    """Generic exponential (Pade scaling-and-squaring)."""
    return GroupElement(expm(element.matrix), tol=tol)


def nilpotent_exp(c: float, sign, w, n: int | None = None) -> GroupElement:
    """
    exp(cV^{+/-} + kappa^{+/-}(w)) = I + N + N^2/2, using N^3 = 0.
    """
    k = kappa_E(sign, w, n)
    big_n = float(c) * basis_element(f"V{sign_symbol(sign)}", k.n).matrix + k.matrix
    eye = np.eye(k.n + 1, dtype=np.complex128)
    return GroupElement(eye + big_n + 0.5 * (big_n @ big_n))


def adjoint(g: GroupElement, element: LieAlgebraElement) -> LieAlgebraElement:
    """Ad_g A = g A g^{-1}."""
    return LieAlgebraElement(g.matrix @ element.matrix @ group_inverse(g.matrix), label="generic")


def _check_unitary(b: ComplexMatrix, size: int, tol: float, what: str) -> ComplexMatrix:
    b = np.atleast_2d(np.asarray(b, dtype=np.complex128))
    if b.shape != (size, size):
        raise ValueError(f"{what} block must be {size}x{size}, got shape {b.shape}")
    res = float(np.max(np.abs(b.conj().T @ b - np.eye(size))))
    if res > tol:
        raise ValueError(f"{what} block is not unitary: residual {res:.3e} > {tol:.1e}")
    return b


def subgroup_element(kind: str, n: int, tol: float = GROUP_TOL, **params) -> GroupElement:
    """
    Elements of the distinguished subgroups of SU(n,1).

    kind:
    - "A":  t            -> exp(tX)
    - "U+", "U-": s      -> exp(sV^{+/-}) = I + sV^{+/-}
    - "K":  B (n x n unitary) -> diag(1/det B, B)
    - "R":  theta, B ((n-1)x(n-1) unitary, det B = e^{-2i theta}) -> diag(e^{i theta}, e^{i theta}, B)
    - "W":  k, block (an SU(k,1) matrix) -> block embedded in the upper left corner
    - "N+", "N-": c, w   -> exp(cV^{+/-} + kappa^{+/-}(w))
    """
    size = SpaceDim(n).size
    eye = np.eye(size, dtype=np.complex128)

    if kind == "A":
        t = float(params["t"])
        m = eye.copy()
        m[0, 0] = m[1, 1] = np.cosh(t)
        m[0, 1] = m[1, 0] = np.sinh(t)
        return GroupElement(m, tol=tol)

    if kind in ("U+", "U-"):
        s = float(params["s"])
        v = basis_element(f"V{kind[1]}", n).matrix
        return GroupElement(eye + s * v, tol=tol)

    if kind == "K":
        b = _check_unitary(params["B"], n, tol, "K")
        m = eye.copy()
        m[1:, 1:] = b
        m[0, 0] = 1.0 / np.linalg.det(b)
        return GroupElement(m, tol=tol)

    if kind == "R":
        theta = float(params["theta"])
        b = _check_unitary(params["B"], n - 1, tol, "R")
        det_res = abs(np.linalg.det(b) - np.exp(-2j * theta))
        if det_res > tol:
            raise ValueError(f"R block must satisfy det B = e^(-2i theta): residual {det_res:.3e}")
        m = eye.copy()
        m[0, 0] = m[1, 1] = np.exp(1j * theta)
        m[2:, 2:] = b
        return GroupElement(m, tol=tol)

    if kind == "W":
        k = int(params["k"])
        if not 1 <= k <= n:
            raise ValueError(f"W_k requires 1 <= k <= n, got k={k}, n={n}")
        block = np.asarray(params["block"], dtype=np.complex128)
        if block.shape != (k + 1, k + 1):
            raise ValueError(f"W_{k} block must be {k + 1}x{k + 1}, got shape {block.shape}")
        if k == 1:
            # SU(1,1) has no SpaceDim of its own; check it directly.
            j = np.diag([-1.0, 1.0]).astype(np.complex128)
            res = max(
                float(np.max(np.abs(block.conj().T @ j @ block - j))),
                float(abs(np.linalg.det(block) - 1.0)),
            )
            if res > tol:
                raise ValueError(f"W_1 block is not in SU(1,1): residual {res:.3e}")
        else:
            GroupElement(block, tol=tol)
        m = eye.copy()
        m[: k + 1, : k + 1] = block
        return GroupElement(m, tol=tol)

    if kind in ("N+", "N-"):
        return nilpotent_exp(float(params["c"]), kind[1], params["w"], n)

    raise ValueError(f"Unknown subgroup kind {kind!r}; expected A, U+, U-, K, R, W, N+ or N-")


def rotation_for_phase(theta: float, n: int) -> GroupElement:
    """An R element acting as the phase e^{i theta} on (e_0, e_1): B = diag(e^{-2i theta}, 1, ...)."""
    b = np.eye(n - 1, dtype=np.complex128)
    b[0, 0] = np.exp(-2j * theta)
    return subgroup_element("R", n, theta=theta, B=b)


def is_unipotent_U(g: GroupElement, tol: float = GROUP_TOL) -> bool:
    """(I - B)^2 = 0, the matrix characterization of U^{+/-} inside N^{+/-}."""
    d = np.eye(g.n + 1) - g.matrix
    return bool(np.max(np.abs(d @ d)) <= tol)


def in_X_W_U(g: GroupElement, ell: int, tol: float = GROUP_TOL) -> bool:
    """
    True iff g(e_0 + e_1) lies in C^{ell,1} + {0}, i.e. its components ell+1..n vanish.
    """
    n = g.n
    if not 1 <= ell <= n:
        raise ValueError(f"ell must satisfy 1 <= ell <= n={n}, got {ell}")
    image = g.matrix[:, 0] + g.matrix[:, 1]
    tail = image[ell + 1:]
    scale = max(1.0, float(np.max(np.abs(image))))
    ok = bool(tail.size == 0 or np.max(np.abs(tail)) <= tol * scale)
    logger.debug("in_X_W_U(ell=%d): tail norm %.3e -> %s", ell, float(np.linalg.norm(tail)), ok)
    return ok
