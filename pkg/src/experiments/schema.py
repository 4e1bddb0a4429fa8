"""
src/experiments/schema.py

Fixed column orders of every CSV artifact and the file names they are written to.
Downstream plotting relies on these orders, so columns are selected through conform() before writing.
"""

from __future__ import annotations

from typing import Dict, List

import pandas as pd

RECTANGLE_COLUMNS: List[str] = ["alpha", "sign", "t", "m", "diameter", "diameter_over_alpha_et"]

FUP_NORM_COLUMNS: List[str] = ["N_or_h", "set_id", "nu", "alpha0", "alpha1", "norm", "method", "residual"]

WORDS_COUNT_COLUMNS: List[str] = ["h", "eps0", "alpha", "N0", "size_Zc", "size_X", "size_Y", "C_h", "C_empirical"]

FLOW_EXPANSION_COLUMNS: List[str] = ["t", "direction", "expected_factor", "measured_factor", "fd_residual"]

SYMPLECTIC_COLUMNS: List[str] = [
    "n", "point", "tau", "max_pairing", "max_lagrangian", "dilation_pairing",
    "convergence_ratio", "symplectic_residual", "max_image_residual",
]

ALGEBRA_COLUMNS: List[str] = ["n", "relation", "max_residual"]

POROSITY_COLUMNS: List[str] = ["set_id", "intervals", "nu", "alpha0", "alpha1", "exact", "grid_oracle", "witness_ok"]

TENSOR_COLUMNS: List[str] = ["pair", "N", "transverse_dim", "norm_1d", "norm_2d", "difference"]

TABLE_COLUMNS: Dict[str, List[str]] = {
    "algebra_check": ALGEBRA_COLUMNS,
    "flow_expansion": FLOW_EXPANSION_COLUMNS,
    "symplectic_check": SYMPLECTIC_COLUMNS,
    "rectangle": RECTANGLE_COLUMNS,
    "rectangle_control": RECTANGLE_COLUMNS,
    "fup_norm": FUP_NORM_COLUMNS,
    "fup_beta": FUP_NORM_COLUMNS,
    "words_count": WORDS_COUNT_COLUMNS,
    "porosity_check": POROSITY_COLUMNS,
    "tensor_check": TENSOR_COLUMNS,
}

SUMMARY_FILE = "summary.json"


def conform(name: str, df: pd.DataFrame) -> pd.DataFrame:
    """Reorder df to the declared columns of table `name`; missing columns are an error."""
    columns = TABLE_COLUMNS.get(name)
    if columns is None:
        raise ValueError(f"No column schema declared for table {name!r}")
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise ValueError(f"Table {name!r} is missing columns: {missing}")
    return df[columns]


def describe_columns() -> str:
    """One line per table, used in the CLI --help epilog."""
    return "\n".join(f"  {name}.csv: {', '.join(cols)}" for name, cols in TABLE_COLUMNS.items())
