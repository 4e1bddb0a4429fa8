"""
src/words/counting.py

Exact sizes of the word sets Z, Z_complement, X, Y and the check of the growth bound
#X <= C h^{-beta/2} along a grid of h.

Counting uses Python integers throughout (2^{4 N0} leaves int64 quickly).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .words import Threshold, all_words, as_threshold, classify_short, propagation_times

logger = logging.getLogger(__name__)

MAX_ENUMERATION_N0 = 6


@dataclass(frozen=True)
class WordCounts:
    N0: int
    size_Z: int
    size_Zc: int
    size_X: int
    size_Y: int


def count_sets(N0: int, alpha: Threshold) -> WordCounts:
    """Closed form: size_Zc = sum_{k < alpha N0} C(N0, k), size_X = size_Zc^4, size_Y = 2^{4 N0} - size_X."""
    if N0 < 1:
        raise ValueError(f"N0 must be >= 1, got {N0}")
    threshold = as_threshold(alpha)
    # Z_complement holds the words with k ones where k / N0 < alpha.
    size_zc = sum(math.comb(N0, k) for k in range(N0 + 1) if _below(k, N0, threshold))
    size_x = size_zc ** 4
    return WordCounts(
        N0=N0,
        size_Z=2 ** N0 - size_zc,
        size_Zc=size_zc,
        size_X=size_x,
        size_Y=2 ** (4 * N0) - size_x,
    )


def _below(k: int, n: int, threshold: Fraction) -> bool:
    return k * threshold.denominator < threshold.numerator * n


def enumerate_counts(N0: int, alpha: Threshold) -> WordCounts:
    """
    Exhaustive oracle: classify every short word, then every long word as a 4-tuple of blocks.
    """
    if not 1 <= N0 <= MAX_ENUMERATION_N0:
        raise ValueError(f"Enumeration supports 1 <= N0 <= {MAX_ENUMERATION_N0}, got {N0}")
    threshold = as_threshold(alpha)
    in_zc = np.array([classify_short(w, threshold, N0) == "Z_complement" for w in all_words(N0)])
    # Long words of length 4 N0 correspond one-to-one to tuples of four short words.
    grid = np.logical_and.outer(np.logical_and.outer(in_zc, in_zc), np.logical_and.outer(in_zc, in_zc))
    size_x = int(grid.sum())
    size_zc = int(in_zc.sum())
    return WordCounts(
        N0=N0,
        size_Z=int(in_zc.size) - size_zc,
        size_Zc=size_zc,
        size_X=size_x,
        size_Y=int(grid.size) - size_x,
    )


def log_count_X(N0: int, alpha: Threshold) -> float:
    """log #X (natural log); -inf when X is empty."""
    size_zc = count_sets(N0, alpha).size_Zc
    return 4.0 * math.log(size_zc) if size_zc else float("-inf")


def stirling_exponent(alpha: float) -> float:
    """
    Rate r(alpha) with size_Zc <= exp(N0 r(alpha)): the binary entropy H(alpha) for alpha <= 1/2,
    log 2 above. Hence #X <= exp(4 N0 r(alpha)).
    """
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if alpha >= 0.5:
        return math.log(2.0)
    if alpha == 0:
        return 0.0
    return -alpha * math.log(alpha) - (1 - alpha) * math.log(1 - alpha)


@dataclass(frozen=True)
class CountBoundRow:
    h: float
    N0: int
    size_Zc: int
    size_X: int
    size_Y: int
    log_C_h: float  # log(#X h^{beta/2}), the smallest log C valid at this h alone
    C_empirical: float  # sup of C_h over grid points with h' <= h

    @property
    def C_h(self) -> float:
        return float(np.exp(self.log_C_h))


@dataclass(frozen=True)
class CountBoundReport:
    beta: float
    alpha: float
    eps0: float
    rows: list[CountBoundRow]
    constant: float
    tail_nonincreasing: bool
    bounded: bool


TAIL_RTOL = 1e-9


def check_count_bound(beta: float, alpha: float, eps0: float, h_grid: Sequence[float]) -> CountBoundReport:
    """
    C_h = #X(N0(h), alpha) h^{beta/2} along a decreasing grid of h.

    The constant is the grid supremum of C_h. The bound is reported as holding when that supremum is
    finite and C_h does not increase (up to a relative TAIL_RTOL) over the smallest-h quarter of the grid.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    hs = [float(h) for h in h_grid]
    if len(hs) < 2:
        raise ValueError("h_grid needs at least two values")
    if any(b >= a for a, b in zip(hs, hs[1:])):
        raise ValueError("h_grid must be strictly decreasing")

    counts = []
    log_c = []
    for h in hs:
        n0, _ = propagation_times(h, eps0)
        c = count_sets(n0, alpha)
        counts.append(c)
        log_c.append((math.log(c.size_X) if c.size_X else float("-inf")) + 0.5 * beta * math.log(h))

    # Running sup from the small-h end: the least C that works for every h' <= h on the grid.
    suffix = np.maximum.accumulate(np.array(log_c)[::-1])[::-1]
    rows = [
        CountBoundRow(
            h=h,
            N0=c.N0,
            size_Zc=c.size_Zc,
            size_X=c.size_X,
            size_Y=c.size_Y,
            log_C_h=lc,
            C_empirical=float(np.exp(sc)),
        )
        for h, c, lc, sc in zip(hs, counts, log_c, suffix)
    ]

    tail = max(1, len(hs) // 4)
    tail_c = [r.C_h for r in rows[-tail:]]
    tail_nonincreasing = all(b <= a * (1 + TAIL_RTOL) for a, b in zip(tail_c, tail_c[1:]))
    constant = float(np.exp(max(log_c)))
    bounded = math.isfinite(constant) and tail_nonincreasing
    logger.info(
        "Count bound beta=%.3g alpha=%.3g eps0=%.3g: C=%.6g tail_nonincreasing=%s bounded=%s",
        beta, alpha, eps0, constant, tail_nonincreasing, bounded,
    )
    return CountBoundReport(
        beta=beta,
        alpha=alpha,
        eps0=eps0,
        rows=rows,
        constant=constant if bounded else float("inf"),
        tail_nonincreasing=tail_nonincreasing,
        bounded=bounded,
    )
