"""
src/experiments/config.py

Typed parameter sets of the lab experiments, one pydantic model per command.

An ExperimentConfig carries the command name and a raw parameter mapping (from flags and/or a YAML file);
typed_params() validates it against the owning command's model. Unknown keys are rejected so a typo
in a config file fails loudly instead of being ignored.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

CommandName = Literal[
    "algebra-check",
    "flow-expansion",
    "symplectic-check",
    "rectangle",
    "fup-norm",
    "fup-beta",
    "words-count",
    "porosity-check",
    "tensor-check",
    "all",
]

DEFAULT_SEED = 20240601


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _check_n(values: list[int]) -> list[int]:
    if not values:
        raise ValueError("at least one dimension n is required")
    bad = [n for n in values if n < 2]
    if bad:
        raise ValueError(f"space dimension must satisfy n >= 2, got {bad}")
    return values


class AlgebraCheckParams(_Params):
    n_list: list[int] = Field(default_factory=lambda: [2, 3, 4, 5])
    random_pairs: int = Field(100, ge=1)
    tolerance: float = Field(1e-11, gt=0)
    seed: int = DEFAULT_SEED

    @field_validator("n_list")
    @classmethod
    def _dims(cls, values: list[int]) -> list[int]:
        return _check_n(values)


class FlowExpansionParams(_Params):
    n: int = Field(2, ge=2)
    t_list: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0, 3.0])
    fd_step: float = Field(1e-6, gt=0)
    composites: int = Field(1000, ge=1)
    composite_length: int = Field(5, ge=1)
    factor_tolerance: float = 1e-12
    fd_tolerance: float = 1e-4
    invariant_tolerance: float = 1e-9
    calibration_window: float = 0.05
    seed: int = DEFAULT_SEED


class SymplecticCheckParams(_Params):
    n_list: list[int] = Field(default_factory=lambda: [2, 3])
    base_points: int = Field(20, ge=1)
    fd_step: float = Field(1e-4, ge=1e-6, le=1e-3)
    convergence_step: float = Field(1e-3, ge=1e-6, le=1e-3)
    straighten_method: Literal["exact", "fd"] = "exact"
    pairing_tolerance: float = 1e-6
    ratio_min: float = 3.0
    ratio_max: float = 5.0
    straighten_tolerance: float = 1e-8
    image_tolerance: float = 1e-7
    seed: int = DEFAULT_SEED

    @field_validator("n_list")
    @classmethod
    def _dims(cls, values: list[int]) -> list[int]:
        return _check_n(values)


class RectangleParams(_Params):
    n: int = Field(2, ge=2)
    alpha_list: list[float] = Field(default_factory=lambda: [1e-1, 3e-2, 1e-2])
    t_step: float = Field(0.5, gt=0)
    m_samples: int = Field(3, ge=2)
    sign: Literal["+", "-"] = "-"
    tau: float = Field(1.0, gt=0)
    max_log_residual: float = 0.5
    min_control_growth: float = 5.0

    @field_validator("alpha_list")
    @classmethod
    def _alphas(cls, values: list[float]) -> list[float]:
        if not values or any(not 0 < a <= 0.5 for a in values):
            raise ValueError(f"rectangle sizes must satisfy 0 < alpha <= chart radius 0.5, got {values}")
        return values


class FupNormParams(_Params):
    family: Literal["cantor"] = "cantor"
    N_list: list[int] = Field(default_factory=lambda: [81, 243, 729, 2187, 6561])
    h_list: list[float] = Field(default_factory=list)
    continuous_depth: int = Field(3, ge=1)
    quad_points: int = Field(2048, ge=1)
    nu: float = Field(0.1, gt=0, lt=1)
    gamma0: float = 0.7
    gamma1: float = 0.0
    workers: int = Field(1, ge=1)

    @field_validator("N_list")
    @classmethod
    def _powers_of_three(cls, values: list[int]) -> list[int]:
        for n in values:
            if n < 3 or 3 ** round(math.log(n, 3)) != n:
                raise ValueError(f"the Cantor family needs N a power of 3, got {n}")
        return values

    @field_validator("h_list")
    @classmethod
    def _hs(cls, values: list[float]) -> list[float]:
        if any(not 0 < h < 1 for h in values):
            raise ValueError(f"h must lie in (0, 1), got {values}")
        return values

    @model_validator(mode="after")
    def _window(self) -> FupNormParams:
        if not 0 <= self.gamma1 < 0.5 < self.gamma0 <= 1:
            raise ValueError(f"exponent window must satisfy 0 <= gamma1 < 1/2 < gamma0 <= 1, got ({self.gamma0}, {self.gamma1})")
        return self


class FupBetaParams(FupNormParams):
    min_beta: float = 0.01
    min_r_squared: float = 0.9
    monotone_from_N: int = 81


class WordsCountParams(_Params):
    beta: float = Field(0.2, gt=0)
    eps0: float = Field(0.1, gt=0, lt=0.25)
    alpha: float = Field(0.05, gt=0, lt=1)
    log_inv_h_list: list[float] = Field(default_factory=lambda: [float(x) for x in range(60, 241, 10)])
    enumeration_max_N0: int = Field(6, ge=1, le=6)
    alpha_grid: list[float] = Field(default_factory=lambda: [round(0.05 * k, 2) for k in range(1, 20)])

    @field_validator("log_inv_h_list")
    @classmethod
    def _grid(cls, values: list[float]) -> list[float]:
        if len(values) < 2 or any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("log(1/h) grid must hold at least two strictly increasing values")
        if values[0] <= 0 or values[-1] >= 700:
            raise ValueError("log(1/h) must lie in (0, 700) so that h is a positive double")
        return values


class PorosityCheckParams(_Params):
    random_sets: int = Field(20, ge=1)
    max_intervals: int = Field(8, ge=1)
    nu: float = Field(0.1, gt=0, lt=1)
    alpha0: float = Field(0.05, gt=0)
    alpha1: float = Field(0.5, gt=0)
    cantor_depths: list[int] = Field(default_factory=lambda: [2, 3, 4, 5])
    x_step: float = Field(1e-4, gt=0)
    length_step: float = Field(1e-3, gt=0)
    gap_T: float = Field(1.0, ge=1)
    gap_delta: float = Field(0.5, gt=0, lt=1)
    gap_depth: int = Field(2, ge=1)
    seed: int = DEFAULT_SEED
    set_files: list[str] = Field(default_factory=list)

    @field_validator("set_files")
    @classmethod
    def _files_exist(cls, values: list[str]) -> list[str]:
        missing = [p for p in values if not Path(p).is_file()]
        if missing:
            raise ValueError(f"interval files not found: {missing}")
        return values


class TensorCheckParams(_Params):
    pairs: int = Field(10, ge=1)
    N: int = Field(64, ge=1)
    transverse_dim: int = Field(16, ge=1)
    tolerance: float = 1e-8
    seed: int = DEFAULT_SEED


PARAM_MODELS: dict[str, type[_Params]] = {
    "algebra-check": AlgebraCheckParams,
    "flow-expansion": FlowExpansionParams,
    "symplectic-check": SymplecticCheckParams,
    "rectangle": RectangleParams,
    "fup-norm": FupNormParams,
    "fup-beta": FupBetaParams,
    "words-count": WordsCountParams,
    "porosity-check": PorosityCheckParams,
    "tensor-check": TensorCheckParams,
}


class ExperimentConfig(BaseModel):
    """
    command: which experiment to run
    params: raw per-command parameters (for "all": a mapping command -> parameters)
    """
    model_config = ConfigDict(extra="forbid")

    command: CommandName
    output_dir: str = "results"
    workers: int = Field(1, ge=1)
    seed: int = DEFAULT_SEED
    params: dict[str, Any] = Field(default_factory=dict)

    def typed_params(self, command: str | None = None) -> _Params:
        """Validated parameter model of `command` (defaults to this config's command)."""
        name = command or self.command
        if name == "all":
            raise ValueError("'all' has no parameter model of its own; pass a sub-command")
        model = PARAM_MODELS[name]
        raw = self.params.get(name, {}) if self.command == "all" else dict(self.params)
        if not isinstance(raw, dict):
            raise ValueError(f"parameters for {name} must be a mapping, got {type(raw).__name__}")
        raw = dict(raw)
        if "seed" in model.model_fields:
            raw.setdefault("seed", self.seed)
        if "workers" in model.model_fields:
            raw.setdefault("workers", self.workers)
        return model(**raw)
