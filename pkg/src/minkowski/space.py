"""
src/minkowski/space.py

Complex Minkowski space C^{n,1}: the dimension guard, the indefinite sesquilinear product
and the signature matrix J = diag(-1, 1, ..., 1).

Vectors are plain complex numpy arrays of length n+1, indexed (z_0, z_1, ..., z_n).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

logger = logging.getLogger(__name__)

MinkVector = npt.NDArray[np.complex128]
ComplexMatrix = npt.NDArray[np.complex128]


@dataclass(frozen=True)
class SpaceDim:
    """
    Complex dimension n of CH^n. The ambient Minkowski space has n+1 coordinates.
    """
    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ValueError(f"Space dimension must be an integer, got {self.n!r}")
        if self.n < 2:
            raise ValueError(f"Space dimension must satisfy n >= 2, got n={self.n}")

    @property
    def size(self) -> int:
        return int(self.n) + 1

    @property
    def slow_dim(self) -> int:
        """Complex dimension of the slow directions (length of a SlowVector)."""
        return int(self.n) - 1


def signature_matrix(n: int) -> ComplexMatrix:
    """J = diag(-1, 1, ..., 1) of size n+1."""
    dim = SpaceDim(n)
    j = np.eye(dim.size, dtype=np.complex128)
    j[0, 0] = -1.0
    return j


def unit_vector(n: int, index: int) -> MinkVector:
    """e_index in C^{n,1}."""
    dim = SpaceDim(n)
    if not 0 <= index < dim.size:
        raise ValueError(f"Basis index {index} out of range for n={n}")
    e = np.zeros(dim.size, dtype=np.complex128)
    e[index] = 1.0
    return e


def as_mink_vector(entries, n: int | None = None) -> MinkVector:
    """
    Coerce entries to a complex vector and check the length against n when given.
    """
    vec = np.asarray(entries, dtype=np.complex128)
    if vec.ndim != 1:
        raise ValueError(f"Minkowski vector must be one-dimensional, got shape {vec.shape}")
    if n is not None and vec.shape[0] != SpaceDim(n).size:
        raise ValueError(f"Minkowski vector has length {vec.shape[0]}, expected {n + 1} for n={n}")
    if vec.shape[0] < 3:
        raise ValueError(f"Minkowski vector needs at least 3 entries (n >= 2), got {vec.shape[0]}")
    return vec


def minkowski_inner(z, w) -> complex:
    """
    <z, w> = -z_0 conj(w_0) + sum_j z_j conj(w_j).
    """
    zv = as_mink_vector(z)
    wv = as_mink_vector(w)
    if zv.shape != wv.shape:
        raise ValueError(f"Dimension mismatch in Minkowski product: {zv.shape[0]} vs {wv.shape[0]}")
    return complex(-zv[0] * np.conj(wv[0]) + np.vdot(wv[1:], zv[1:]))


def hermitian_inner(z, w) -> complex:
    """Positive definite product sum_j z_j conj(w_j) on C^m (used for slow vectors)."""
    zv = np.asarray(z, dtype=np.complex128)
    wv = np.asarray(w, dtype=np.complex128)
    if zv.shape != wv.shape:
        raise ValueError(f"Dimension mismatch in Hermitian product: {zv.shape} vs {wv.shape}")
    return complex(np.vdot(wv, zv))
