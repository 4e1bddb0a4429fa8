"""
src/experiments/writer.py

Deterministic, atomic artifact writing: CSV through pandas with a fixed float format,
JSON with sorted keys. Files are written to a temporary sibling and moved into place with os.replace.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any

import pandas as pd

from src.minkowski.serialize import to_builtin

from .schema import conform

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(name: str, df: pd.DataFrame, output_dir: str | Path) -> Path:
    path = Path(output_dir) / f"{name}.csv"
    text = conform(name, df).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    _atomic_write_text(path, text)
    logger.info("Wrote %s (%d rows)", path, len(df))
    return path


def dumps_json(obj: Any) -> str:
    return json.dumps(to_builtin(obj), sort_keys=True, indent=2, allow_nan=True) + "\n"


def write_json(name: str, obj: Any, output_dir: str | Path) -> Path:
    path = Path(output_dir) / f"{name}.json"
    _atomic_write_text(path, dumps_json(obj))
    logger.info("Wrote %s", path)
    return path


def write_result(result, output_dir: str | Path) -> list[Path]:
    """CSV tables of an ExperimentResult plus <name>.json holding its report and verdicts."""
    paths = [write_csv(name, df, output_dir) for name, df in result.tables.items()]
    report = {**result.report, "criteria": result.criteria, "passed": result.passed}
    paths.append(write_json(result.name, report, output_dir))
    return paths
