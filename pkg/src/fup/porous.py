"""
src/fup/porous.py

Porous sets as finite unions of disjoint closed intervals, the exact porosity decision,
and the constructions used in the FUP experiments (Cantor iterates, the gap construction,
thickening and diffeomorphic images).

A set Omega is nu-porous on scales alpha0..alpha1 when every interval I with |I| in [alpha0, alpha1]
contains an interval J with |J| = nu|I| and J disjoint from Omega.

Exact decision: an interval I = [x, x+L] fails iff, with i and j the first and last components it meets,
every free piece of I is shorter than nu L. Writing G_ij for the largest gap strictly between components
i and j, such an x exists iff
    G_ij / nu < L   and   (1 - 2 nu) L < b_j - a_i,
so only O(K^2) component pairs need checking; each pair yields an explicit window of failing L.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from typing import Callable, Optional

import numpy as np

logger = logging.getLogger(__name__)

# Blocks narrower than this cannot be resolved in double precision on [0, 1].
MIN_BLOCK_WIDTH = 1e-14
MAX_COMPONENTS = 1 << 16


@dataclass(frozen=True, eq=False)
class PorousSet:
    """
    Sorted, pairwise disjoint closed intervals [a, b] (b > a) inside bounds (default [0, 1]).
    """
    intervals: np.ndarray
    bounds: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self) -> None:
        arr = np.asarray(self.intervals, dtype=float).reshape(-1, 2)
        lo, hi = float(self.bounds[0]), float(self.bounds[1])
        if not lo < hi:
            raise ValueError(f"Bounds must satisfy lo < hi, got {self.bounds}")
        if arr.size:
            if np.any(arr[:, 1] <= arr[:, 0]):
                raise ValueError("Every interval must satisfy b > a")
            if np.any(arr[1:, 0] <= arr[:-1, 1]):
                raise ValueError("Intervals must be sorted and pairwise disjoint")
            slack = 1e-12 * max(1.0, hi - lo)
            if arr[0, 0] < lo - slack or arr[-1, 1] > hi + slack:
                raise ValueError(f"Intervals must lie in [{lo}, {hi}]")
        arr.setflags(write=False)
        object.__setattr__(self, "intervals", arr)
        object.__setattr__(self, "bounds", (lo, hi))

    @classmethod
    def empty(cls, bounds: tuple[float, float] = (0.0, 1.0)) -> PorousSet:
        return cls(np.zeros((0, 2)), bounds)

    @classmethod
    def from_unsorted(cls, intervals, bounds: tuple[float, float] = (0.0, 1.0)) -> PorousSet:
        """Sort and merge overlapping or touching intervals."""
        return cls(_merge(np.asarray(intervals, dtype=float).reshape(-1, 2)), bounds)

    @property
    def count(self) -> int:
        return int(self.intervals.shape[0])

    def measure(self) -> float:
        if not self.count:
            return 0.0
        return float(np.sum(self.intervals[:, 1] - self.intervals[:, 0]))

    def contains(self, x) -> np.ndarray:
        pts = np.atleast_1d(np.asarray(x, dtype=float))
        if not self.count:
            return np.zeros(pts.shape, dtype=bool)
        pos = np.searchsorted(self.intervals[:, 0], pts, side="right") - 1
        ok = pos >= 0
        safe = np.clip(pos, 0, None)
        return ok & (pts <= self.intervals[safe, 1])


def _merge(arr: np.ndarray) -> np.ndarray:
    if not arr.size:
        return np.zeros((0, 2))
    arr = arr[np.argsort(arr[:, 0], kind="stable")]
    merged = [list(arr[0])]
    for a, b in arr[1:]:
        if a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return np.asarray(merged, dtype=float)


@dataclass(frozen=True)
class PorosityResult:
    porous: bool
    witness: Optional[tuple[float, float]] = None  # a failing interval [x, x + L]

    def __bool__(self) -> bool:
        return self.porous


def _check_porosity_params(nu: float, alpha0: float, alpha1: float) -> None:
    if not 0 < nu < 1:
        raise ValueError(f"Porosity constant must satisfy 0 < nu < 1, got {nu}")
    if not 0 < alpha0 <= alpha1:
        raise ValueError(f"Scale window must satisfy 0 < alpha0 <= alpha1, got ({alpha0}, {alpha1})")


def is_porous(omega: PorousSet, nu: float, alpha0: float, alpha1: float) -> PorosityResult:
    """Exact porosity decision with a failing interval as witness."""
    _check_porosity_params(nu, alpha0, alpha1)
    k = omega.count
    if k == 0:
        return PorosityResult(True)
    a = omega.intervals[:, 0]
    b = omega.intervals[:, 1]
    gaps = a[1:] - b[:-1]

    for i in range(k):
        largest = np.concatenate([[0.0], np.maximum.accumulate(gaps[i:])]) if i < k - 1 else np.zeros(1)
        span = b[i:] - a[i]
        open_low = largest / nu
        upper_open = span / (1.0 - 2.0 * nu) if nu < 0.5 else np.full(span.shape, np.inf)
        lo = np.maximum(open_low, alpha0)
        hi = np.minimum(upper_open, alpha1)
        interior = lo < hi
        # Degenerate window alpha0 == alpha1 that is still admissible.
        single = (alpha0 > open_low) & (alpha0 == alpha1) & (alpha0 < upper_open)
        feasible = interior | single
        if feasible.any():
            m = int(np.argmax(feasible))
            length = float(0.5 * (lo[m] + hi[m])) if interior[m] else float(alpha0)
            x = 0.5 * (a[i] + b[i + m] - length)
            logger.debug("Porosity fails on components %d..%d: interval [%.6g, %.6g]", i, i + m, x, x + length)
            return PorosityResult(False, (float(x), float(x + length)))
    return PorosityResult(True)


def _complement_pieces(omega: PorousSet) -> np.ndarray:
    """Open components of R minus Omega as (lo, hi) rows; infinite ends included."""
    if not omega.count:
        return np.array([[-np.inf, np.inf]])
    a = omega.intervals[:, 0]
    b = omega.intervals[:, 1]
    lows = np.concatenate([[-np.inf], b])
    highs = np.concatenate([a, [np.inf]])
    return np.column_stack([lows, highs])


def free_length(omega: PorousSet, x, length: float) -> np.ndarray:
    """Longest piece of [x, x + length] disjoint from Omega (vectorized over x)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    pieces = _complement_pieces(omega)
    left = np.maximum(xs[:, None], pieces[None, :, 0])
    right = np.minimum(xs[:, None] + length, pieces[None, :, 1])
    return np.max(np.clip(right - left, 0.0, None), axis=1)


def grid_porosity_scan(
    omega: PorousSet,
    nu: float,
    alpha0: float,
    alpha1: float,
    x_step: float = 1e-4,
    length_step: float = 1e-3,
) -> bool:
    """Brute-force oracle: test every interval with x on an x_step grid and |I| on a length_step grid."""
    _check_porosity_params(nu, alpha0, alpha1)
    if not omega.count:
        return True
    lengths = np.arange(alpha0, alpha1, length_step)
    lengths = np.append(lengths, alpha1)
    lo_set, hi_set = omega.intervals[0, 0], omega.intervals[-1, 1]
    for length in lengths:
        xs = np.arange(lo_set - length, hi_set + x_step, x_step)
        if np.any(free_length(omega, xs, length) < nu * length):
            return False
    return True


def cantor_iterate(base: int, kept_digits, depth: int) -> PorousSet:
    """Union of base^-depth intervals whose base-ary digits all lie in kept_digits."""
    kept = sorted({int(d) for d in kept_digits})
    if base < 3:
        raise ValueError(f"Cantor base must be >= 3, got {base}")
    if not kept or len(kept) >= base or kept[0] < 0 or kept[-1] >= base:
        raise ValueError(f"Kept digits must be a proper nonempty subset of 0..{base - 1}, got {kept_digits}")
    if depth < 1:
        raise ValueError(f"Cantor depth must be >= 1, got {depth}")
    size = base ** depth
    starts = sorted(
        sum(d * base ** (depth - 1 - pos) for pos, d in enumerate(digits))
        for digits in product(kept, repeat=depth)
    )
    arr = np.array([[s / size, (s + 1) / size] for s in starts], dtype=float)
    return PorousSet(_merge(arr))


def gap_construction(T: float, delta: float, depth: int) -> tuple[PorousSet, float]:
    """
    Remove a centered gap of relative width r = delta / T from every block, generation by generation,
    until blocks are no wider than (1 - 2 nu') e^{-2 depth}.

    Every interval of length L >= e^{-2 depth} then contains a free piece of length r/(1+2r) L >= nu' L,
    so the set is nu'-porous on scales e^{-2 depth} to 1 with nu' = e^{-2} delta / T.

    depth sets the target scale, not the number of generations. With T = 1, delta = 1/2 and depth 1,
    two generations run and leave four blocks: [0, 1/16], [3/16, 1/4], [3/4, 13/16] and [15/16, 1].
    """
    if T < 1:
        raise ValueError(f"T must satisfy T >= 1, got {T}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    r = delta / T
    nu_prime = float(np.exp(-2.0) * r)
    leaf_width = (1.0 - 2.0 * nu_prime) * np.exp(-2.0 * depth)

    lefts = np.zeros(1)
    width = 1.0
    while width > leaf_width:
        child = 0.5 * width * (1.0 - r)
        if child < MIN_BLOCK_WIDTH:
            raise ValueError(f"Depth {depth} needs blocks narrower than {MIN_BLOCK_WIDTH:g}")
        if 2 * lefts.size > MAX_COMPONENTS:
            raise ValueError(f"Depth {depth} needs more than {MAX_COMPONENTS} components")
        lefts = np.sort(np.concatenate([lefts, lefts + width - child]))
        width = child

    intervals = np.column_stack([lefts, lefts + width])
    logger.debug("gap_construction(T=%g, delta=%g, depth=%d): %d blocks of width %.3e",
                 T, delta, depth, lefts.size, width)
    return PorousSet(intervals), nu_prime


def thicken(omega: PorousSet, alpha: float) -> PorousSet:
    """Omega + [-alpha, alpha], clipped to the bounds and merged."""
    if alpha < 0:
        raise ValueError(f"Thickening radius must be >= 0, got {alpha}")
    if alpha == 0 or not omega.count:
        return omega
    lo, hi = omega.bounds
    grown = omega.intervals + np.array([-alpha, alpha])
    grown = np.clip(grown, lo, hi)
    return PorousSet(_merge(grown), omega.bounds)


def thicken_porosity_window(nu: float, alpha0: float, alpha1: float, alpha: float) -> tuple[float, float, float]:
    """A nu-porous set on alpha0..alpha1 thickened by alpha is nu/3-porous on max(alpha0, 3 alpha/nu)..alpha1."""
    return nu / 3.0, max(alpha0, 3.0 * alpha / nu), alpha1


@dataclass(frozen=True)
class DiffeoBounds:
    """Bounds on a monotone C^2 map: min_slope <= |psi'| <= max_slope, |psi''| <= max_curvature."""
    min_slope: float
    max_slope: float
    max_curvature: float

    def __post_init__(self) -> None:
        if not 0 < self.min_slope <= self.max_slope:
            raise ValueError(f"Slope bounds must satisfy 0 < min <= max, got ({self.min_slope}, {self.max_slope})")
        if self.max_curvature < 0:
            raise ValueError(f"Curvature bound must be >= 0, got {self.max_curvature}")


def diffeo_porosity_window(nu: float, alpha0: float, alpha1: float, bounds: DiffeoBounds) -> tuple[float, float, float]:
    """psi(Omega) is nu m/M-porous on scales M alpha0 .. m alpha1 (m, M the slope bounds)."""
    m, big_m = bounds.min_slope, bounds.max_slope
    return nu * m / big_m, big_m * alpha0, m * alpha1


def diffeo_image(
    omega: PorousSet,
    psi: Callable[[np.ndarray], np.ndarray],
    bounds: DiffeoBounds,
    grid_points: int = 4097,
) -> PorousSet:
    """
    psi(Omega) as intervals (psi applied to endpoints). The supplied bounds are checked
    against divided differences of psi on a uniform grid over omega.bounds.
    """
    lo, hi = omega.bounds
    grid = np.linspace(lo, hi, grid_points)
    values = np.asarray(psi(grid), dtype=float)
    steps = np.diff(values)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise ValueError("psi must be strictly monotone on the set bounds")

    dx = grid[1] - grid[0]
    slopes = np.abs(steps) / dx
    rel = 1e-9
    if slopes.min() < bounds.min_slope * (1 - rel) or slopes.max() > bounds.max_slope * (1 + rel):
        raise ValueError(
            f"psi slopes [{slopes.min():.6g}, {slopes.max():.6g}] violate the supplied bounds "
            f"[{bounds.min_slope}, {bounds.max_slope}]"
        )
    if grid_points > 2:
        curvature = np.abs(np.diff(steps)) / dx ** 2
        if curvature.max() > bounds.max_curvature * (1 + 1e-6) + 1e-6:
            raise ValueError(f"psi curvature {curvature.max():.6g} exceeds the bound {bounds.max_curvature}")

    new_bounds = tuple(sorted((float(values[0]), float(values[-1]))))
    if not omega.count:
        return PorousSet.empty(new_bounds)
    image = np.asarray(psi(omega.intervals.ravel()), dtype=float).reshape(-1, 2)
    image = np.sort(image, axis=1)
    image = image[np.argsort(image[:, 0])]
    return PorousSet(image, new_bounds)
