# app/commands.py
"""
app/commands.py

Command registry for the lab CLI.

Each experiment command declares:
- its help line
- the runner in src/experiments/suites.py
- the flags it accepts and the parameter key each flag fills

Flag values are parsed here (comma-separated lists, numbers) so argparse reports bad values
as usage errors (exit 2) before anything runs.
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass, field
from typing import Any, Callable

from src.experiments.suites import RUNNERS, ExperimentResult

logger = logging.getLogger(__name__)


def _split(raw: str) -> list[str]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list, got {raw!r}")
    return parts


def int_list(raw: str) -> list[int]:
    try:
        return [int(p) for p in _split(raw)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from None


def float_list(raw: str) -> list[float]:
    try:
        return [float(p) for p in _split(raw)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {raw!r}") from None


def str_list(raw: str) -> list[str]:
    return _split(raw)


@dataclass(frozen=True)
class Flag:
    option: str
    key: str  # parameter name in the command's pydantic model
    parse: Callable[[str], Any]
    help: str
    choices: tuple[str, ...] | None = None


@dataclass(frozen=True)
class CommandSpec:
    name: str
    help: str
    flags: tuple[Flag, ...] = field(default_factory=tuple)

    @property
    def runner(self) -> Callable[[Any], ExperimentResult]:
        return RUNNERS[self.name]


_FUP_FLAGS = (
    Flag("--family", "family", str, "set family", choices=("cantor",)),
    Flag("--N", "N_list", int_list, "grid sizes, powers of 3 (e.g. 81,243,729)"),
    Flag("--h", "h_list", float_list, "semiclassical parameters for the continuous operator"),
    Flag("--nu", "nu", float, "porosity constant recorded with each row"),
    Flag("--gamma0", "gamma0", float, "upper scale exponent (alpha0 = h^gamma0)"),
    Flag("--gamma1", "gamma1", float, "lower scale exponent (alpha1 = h^gamma1)"),
    Flag("--quad-points", "quad_points", int, "quadrature points per unit length"),
)

COMMANDS: dict[str, CommandSpec] = {
    cmd.name: cmd
    for cmd in (
        CommandSpec(
            "algebra-check",
            "commutation relations of su(n,1) and the nilpotent subgroups",
            (
                Flag("--n", "n_list", int_list, "dimensions n (e.g. 2,3)"),
                Flag("--pairs", "random_pairs", int, "random (w, w~) pairs per dimension"),
                Flag("--tolerance", "tolerance", float, "max allowed residual"),
            ),
        ),
        CommandSpec(
            "flow-expansion",
            "expansion factors of the geodesic flow against finite differences",
            (
                Flag("--n", "n", int, "dimension n"),
                Flag("--t", "t_list", float_list, "flow times"),
                Flag("--fd-step", "fd_step", float, "finite-difference step"),
                Flag("--composites", "composites", int, "random flow composites for the invariant check"),
            ),
        ),
        CommandSpec(
            "symplectic-check",
            "pairings of the canonical form in the chart and the straightening map",
            (
                Flag("--n", "n_list", int_list, "dimensions n"),
                Flag("--points", "base_points", int, "random base points per dimension"),
                Flag("--fd-step", "fd_step", float, "finite-difference step of the form"),
                Flag("--method", "straighten_method", str, "form used by the straightening", choices=("exact", "fd")),
            ),
        ),
        CommandSpec(
            "rectangle",
            "diameter of propagated rectangles and the wide-slab control",
            (
                Flag("--n", "n", int, "dimension n"),
                Flag("--alpha", "alpha_list", float_list, "rectangle sizes"),
                Flag("--t-step", "t_step", float, "time step of the sweep"),
                Flag("--m", "m_samples", int, "sampling parameter"),
                Flag("--sign", "sign", str, "rectangle family", choices=("+", "-")),
            ),
        ),
        CommandSpec("fup-norm", "Fourier localization norms of porous sets", _FUP_FLAGS),
        CommandSpec("fup-beta", "decay exponent fitted over a grid-size sweep", _FUP_FLAGS),
        CommandSpec(
            "words-count",
            "sizes of the word sets and the growth bound on X",
            (
                Flag("--beta", "beta", float, "decay exponent of the bound"),
                Flag("--eps0", "eps0", float, "propagation parameter"),
                Flag("--alpha", "alpha", float, "density threshold"),
                Flag("--log-inv-h", "log_inv_h_list", float_list, "values of log(1/h), increasing"),
            ),
        ),
        CommandSpec(
            "porosity-check",
            "exact porosity against a grid oracle, thickening and diffeomorphic images",
            (
                Flag("--sets", "random_sets", int, "random interval unions"),
                Flag("--x-step", "x_step", float, "grid step of the oracle"),
                Flag("--set-file", "set_files", str_list, "extra interval files (one 'a b' per line), comma-separated"),
            ),
        ),
        CommandSpec(
            "tensor-check",
            "2D restricted DFT norms against their 1D factor",
            (
                Flag("--pairs", "pairs", int, "random set pairs"),
                Flag("--N", "N", int, "grid size"),
                Flag("--transverse", "transverse_dim", int, "transverse dimension"),
            ),
        ),
    )
}


def add_command_flags(parser: argparse.ArgumentParser, cmd: CommandSpec) -> None:
    """Flags default to SUPPRESS so only flags given on the command line override the config file."""
    for flag in cmd.flags:
        parser.add_argument(
            flag.option,
            dest=f"param__{flag.key}",
            type=flag.parse,
            choices=flag.choices,
            default=argparse.SUPPRESS,
            help=flag.help,
        )


def flag_params(args: argparse.Namespace) -> dict[str, Any]:
    params = {k.removeprefix("param__"): v for k, v in vars(args).items() if k.startswith("param__")}
    if params:
        logger.info("CLI parameter overrides: %s", sorted(params))
    return params
