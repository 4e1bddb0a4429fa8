"""
src/fup/io.py

Plain-text PorousSet files: one interval "a b" per line, decimal, '#' comments allowed.
"""

from __future__ import annotations

import logging
from pathlib import Path

import pandas as pd

from .porous import PorousSet

logger = logging.getLogger(__name__)


def read_porous_set(path: str | Path, bounds: tuple[float, float] = (0.0, 1.0)) -> PorousSet:
    try:
        df = pd.read_csv(path, sep=r"\s+", header=None, names=["a", "b"], comment="#", dtype=float,
                         float_precision="round_trip")
    except pd.errors.EmptyDataError:
        return PorousSet.empty(bounds)
    if df.isna().any().any():
        raise ValueError(f"{path}: every line must hold two numbers 'a b'")
    omega = PorousSet(df[["a", "b"]].to_numpy(), bounds)
    logger.info("Loaded %d intervals from %s", omega.count, path)
    return omega


def write_porous_set(omega: PorousSet, path: str | Path) -> None:
    df = pd.DataFrame(omega.intervals, columns=["a", "b"])
    df.to_csv(path, sep=" ", header=False, index=False, float_format="%.17g")
