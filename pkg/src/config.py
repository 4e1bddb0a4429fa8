# src/config.py

"""
src/config.py

Centralized configuration via environment variables.
Keeps the output location, logging level, seed and worker count in one place so the lab runs the same way
on a laptop and in CI.
"""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Settings:
    """
    Settings container (dataclass) loaded from environment variables.
    The from_env class method is responsible for parsing environment variables and constructing the Settings object.
    """
    app_title: str
    output_dir: str
    log_level: str

    workers: int = 1  # Thread pool size for norm sweeps (1 = sequential)
    seed: int = 20240601  # Base seed for randomized invariant checks
    max_render_rows: int = 20  # Max number of rows to render in the CLI tables

    @staticmethod
    def _get_int(name: str, default: int) -> int:
        """
        Small helper to safely parse integer env vars.
        """
        raw = os.getenv(name)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            return default

    @classmethod
    def from_env(cls) -> Settings:
        """
        Method used to construct Settings from environment variables.
        """
        return cls(
            app_title=os.getenv("APP_TITLE", "Complex Hyperbolic Dynamics Lab"),
            output_dir=os.getenv("LAB_OUTPUT_DIR", "results"),
            log_level=os.getenv("LAB_LOG_LEVEL", "INFO").strip().upper(),

            workers=cls._get_int("LAB_WORKERS", 1),
            seed=cls._get_int("LAB_SEED", 20240601),
            max_render_rows=cls._get_int("MAX_RENDER_ROWS", 20),
        )


def get_settings() -> Settings:
    """
    Single entry point used by the app.
    """
    return Settings.from_env()
