"""
src/minkowski/serialize.py

JSON-ready encodings: complex matrices as row-major arrays of [re, im] pairs,
complex vectors as arrays of [re, im], real coefficient arrays as plain lists.
"""

from __future__ import annotations

from typing import Any

import numpy as np


def complex_vector_to_json(vec) -> list[list[float]]:
    v = np.asarray(vec, dtype=np.complex128)
    return [[float(x.real), float(x.imag)] for x in v]


def complex_vector_from_json(data: list[list[float]]) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"Expected a list of [re, im] pairs, got shape {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


def complex_matrix_to_json(mat) -> list[list[list[float]]]:
    m = np.asarray(mat, dtype=np.complex128)
    return [complex_vector_to_json(row) for row in m]


def complex_matrix_from_json(data: list[list[list[float]]]) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"Expected a square array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def real_vector_to_json(vec) -> list[float]:
    return [float(x) for x in np.asarray(vec, dtype=float)]


def to_builtin(value: Any) -> Any:
    """Recursively convert numpy scalars/arrays to builtin types for json.dumps."""
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return complex_vector_to_json(value) if value.ndim == 1 else complex_matrix_to_json(value)
        return to_builtin(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value
