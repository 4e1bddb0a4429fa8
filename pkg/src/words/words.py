"""
src/words/words.py

Words over the alphabet {1, 2} and their classification.

- density F(w) = #{j : w_j = 1} / len(w), an exact Fraction
- short words (length N0): Z iff F(w) >= alpha (ties go to Z), Z_complement otherwise
- long words (length 4 N0): X iff every length-N0 block is in Z_complement, Y otherwise
- propagation times N0 = ceil((1 - eps0)/6 log(1/h)), N1 = 2 N0
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Literal, Optional, Union

from pydantic import BaseModel, model_validator

ShortClass = Literal["Z", "Z_complement"]
LongClass = Literal["X", "Y"]
Threshold = Union[Fraction, int, float, str]

ALPHABET = (1, 2)
# Absorbs the rounding of log(1/h) when (1 - eps0)/6 log(1/h) is an integer, e.g. h = e^-60.
_CEIL_SLACK = 1e-9


@dataclass(frozen=True)
class Word:
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        digits = tuple(int(d) for d in self.digits)
        if not digits:
            raise ValueError("A word must be nonempty")
        if any(d not in ALPHABET for d in digits):
            raise ValueError(f"Word digits must lie in {{1, 2}}, got {digits}")
        object.__setattr__(self, "digits", digits)

    @classmethod
    def parse(cls, text: str) -> Word:
        """'1122' -> Word((1, 1, 2, 2)); spaces and dots are ignored."""
        cleaned = text.replace(" ", "").replace(".", "").replace("·", "")
        if not cleaned.isdigit():
            raise ValueError(f"Cannot parse word {text!r}")
        return cls(tuple(int(c) for c in cleaned))

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits)

    def blocks(self, block_length: int) -> list[Word]:
        if block_length < 1 or len(self) % block_length:
            raise ValueError(f"Length {len(self)} is not a multiple of block length {block_length}")
        return [Word(self.digits[i:i + block_length]) for i in range(0, len(self), block_length)]


def all_words(length: int) -> Iterator[Word]:
    """All 2^length words in lexicographic order."""
    if length < 1:
        raise ValueError(f"Word length must be >= 1, got {length}")
    for digits in product(ALPHABET, repeat=length):
        yield Word(digits)


def concatenate(*words: Word) -> Word:
    return Word(tuple(d for w in words for d in w.digits))


def as_threshold(alpha: Threshold) -> Fraction:
    """Exact rational threshold; floats go through their shortest decimal repr (0.3 -> 3/10)."""
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, float):
        if not math.isfinite(alpha):
            raise ValueError(f"Density threshold must be finite, got {alpha}")
        return Fraction(repr(alpha))
    return Fraction(alpha)


def density(w: Word) -> Fraction:
    return Fraction(sum(1 for d in w.digits if d == 1), len(w))


def classify_short(w: Word, alpha: Threshold, N0: Optional[int] = None) -> ShortClass:
    if N0 is not None and len(w) != N0:
        raise ValueError(f"Short word must have length N0={N0}, got {len(w)}")
    return "Z" if density(w) >= as_threshold(alpha) else "Z_complement"


def classify_long(w: Word, alpha: Threshold, N0: int) -> LongClass:
    if len(w) != 4 * N0:
        raise ValueError(f"Long word must have length 4*N0={4 * N0}, got {len(w)}")
    threshold = as_threshold(alpha)
    if all(classify_short(block, threshold) == "Z_complement" for block in w.blocks(N0)):
        return "X"
    return "Y"


def split_word(w: Word, N1: Optional[int] = None) -> tuple[Word, Word]:
    """
    w = w_plus w_minus with |w_plus| = |w_minus| = N1.
    w_plus is read right to left (w+_{N1} .. w+_1), w_minus left to right (w-_0 .. w-_{N1-1});
    see plus_digit / minus_digit.
    """
    if len(w) % 2:
        raise ValueError(f"Cannot split a word of odd length {len(w)}")
    half = len(w) // 2
    if N1 is not None and half != N1:
        raise ValueError(f"Word length must be 2*N1={2 * N1}, got {len(w)}")
    return Word(w.digits[:half]), Word(w.digits[half:])


def plus_digit(w_plus: Word, k: int) -> int:
    """w+_k for k = 1..N1; w+_1 is the last digit."""
    if not 1 <= k <= len(w_plus):
        raise ValueError(f"Index must lie in 1..{len(w_plus)}, got {k}")
    return w_plus.digits[len(w_plus) - k]


def minus_digit(w_minus: Word, k: int) -> int:
    """w-_k for k = 0..N1-1."""
    if not 0 <= k < len(w_minus):
        raise ValueError(f"Index must lie in 0..{len(w_minus) - 1}, got {k}")
    return w_minus.digits[k]


def _check_times_params(h: float, eps0: float) -> None:
    if not 0 < h < 1:
        raise ValueError(f"h must lie in (0, 1), got {h}")
    if not 0 < eps0 < 0.25:
        raise ValueError(f"eps0 must lie in (0, 1/4), got {eps0}")


def propagation_times(h: float, eps0: float) -> tuple[int, int]:
    _check_times_params(h, eps0)
    raw = (1.0 - eps0) / 6.0 * math.log(1.0 / h)
    n0 = max(1, math.ceil(raw - _CEIL_SLACK))
    return n0, 2 * n0


class WordParams(BaseModel):
    h: float
    eps0: float
    alpha: float
    N0: Optional[int] = None
    N1: Optional[int] = None

    @model_validator(mode="after")
    def _check(self) -> WordParams:
        _check_times_params(self.h, self.eps0)
        if not 0 < self.alpha < 1:
            raise ValueError(f"Density threshold must lie in (0, 1), got {self.alpha}")
        n0, n1 = propagation_times(self.h, self.eps0)
        if self.N0 is not None and self.N0 != n0:
            raise ValueError(f"N0={self.N0} does not match ceil((1 - eps0)/6 log(1/h)) = {n0}")
        if self.N1 is not None and self.N1 != n1:
            raise ValueError(f"N1={self.N1} must equal 2*N0 = {n1}")
        self.N0, self.N1 = n0, n1
        return self
