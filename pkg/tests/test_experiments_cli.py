"""
tests/test_experiments_cli.py

Runs the CLI end to end with small parameters:
- exit codes (pass, usage error, invalid configuration)
- artifacts on disk and their column orders
- byte-identical outputs for identical configurations
- YAML config files with flags taking precedence
- interval files passed to porosity-check
"""

from __future__ import annotations

import json
import math

import pandas as pd
import pytest

from app.main import main
from src.experiments.config import ExperimentConfig, WordsCountParams
from src.experiments.schema import TABLE_COLUMNS, conform
from src.experiments.suites import ACCEPTANCE, RUNNERS, run_words_count
from src.fup.io import write_porous_set
from src.fup.porous import PorousSet

WORDS_ARGS = ["words-count", "--log-inv-h", "60,80,100,120,140", "--quiet"]


def _read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_algebra_check_passes(tmp_path):
    code = main(["algebra-check", "--n", "3", "--pairs", "5", "--output-dir", str(tmp_path), "--quiet"])
    assert code == 0

    report = _read_json(tmp_path / "algebra_check.json")
    assert report["passed"] is True
    assert report["max_residual"] <= 1e-11

    df = pd.read_csv(tmp_path / "algebra_check.csv")
    assert list(df.columns) == TABLE_COLUMNS["algebra_check"]


def test_fup_beta_reports_positive_decay(tmp_path):
    code = main(["fup-beta", "--family", "cantor", "--N", "81,243,729,2187", "--output-dir", str(tmp_path), "--quiet"])
    assert code == 0
    report = _read_json(tmp_path / "fup_beta.json")
    assert report["beta_hat"] > 0
    assert [s["N"] for s in report["samples"]] == [81, 243, 729, 2187]


def test_unknown_command_is_a_usage_error():
    assert main(["no-such-command"]) == 2


def test_bad_flag_value_is_a_usage_error(tmp_path):
    assert main(["algebra-check", "--n", "two", "--output-dir", str(tmp_path)]) == 2


def test_precondition_violation_exits_2(tmp_path):
    # n >= 2 is checked before anything runs
    assert main(["algebra-check", "--n", "1", "--output-dir", str(tmp_path), "--quiet"]) == 2
    assert not (tmp_path / "algebra_check.json").exists()
    # N must be a power of 3 for the Cantor family
    assert main(["fup-norm", "--N", "100", "--output-dir", str(tmp_path), "--quiet"]) == 2


def test_outputs_are_byte_identical(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(WORDS_ARGS + ["--output-dir", str(first)]) == 0
    assert main(WORDS_ARGS + ["--output-dir", str(second)]) == 0
    for name in ("words_count.csv", "words_count.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_config_file_with_flag_override(tmp_path):
    config = tmp_path / "lab.yaml"
    config.write_text(
        "seed: 5\n"
        "words-count:\n"
        "  alpha: 0.1\n"
        "  log_inv_h_list: [60, 70, 80, 90]\n"
        "algebra-check:\n"
        "  n_list: [2]\n"
    )
    out = tmp_path / "out"
    assert main(["words-count", "--config", str(config), "--alpha", "0.05", "--output-dir", str(out), "--quiet"]) == 0
    report = _read_json(out / "words_count.json")
    assert report["alpha"] == 0.05
    assert len(pd.read_csv(out / "words_count.csv")) == 4


def test_config_file_rejects_unknown_keys(tmp_path):
    config = tmp_path / "lab.yaml"
    config.write_text("betta: 0.2\n")
    assert main(["words-count", "--config", str(config), "--output-dir", str(tmp_path), "--quiet"]) == 2


def test_typed_params_injects_run_seed():
    cfg = ExperimentConfig(command="all", seed=9, params={"algebra-check": {"n_list": [2]}})
    assert cfg.typed_params("algebra-check").seed == 9
    assert cfg.typed_params("porosity-check").seed == 9
    with pytest.raises(ValueError):
        cfg.typed_params()


def test_words_runner_criteria():
    result = run_words_count(WordsCountParams(log_inv_h_list=[60.0, 100.0, 140.0, 180.0], enumeration_max_N0=3))
    assert result.passed
    assert set(result.criteria) == {
        "closed_form_matches_enumeration",
        "partition",
        "count_bound_constant_nonincreasing",
        "count_bound_bounded",
    }


def test_conform_requires_declared_columns():
    with pytest.raises(ValueError):
        conform("words_count", pd.DataFrame({"h": [0.1]}))
    with pytest.raises(ValueError):
        conform("no_such_table", pd.DataFrame())


def test_all_writes_a_summary(tmp_path):
    config = tmp_path / "small.yaml"
    config.write_text(
        "algebra-check: {n_list: [2], random_pairs: 3}\n"
        "flow-expansion: {t_list: [0.5, 1.0], composites: 20}\n"
        "symplectic-check: {n_list: [2], base_points: 1}\n"
        "rectangle: {alpha_list: [0.1], m_samples: 2}\n"
        "fup-norm: {N_list: [81, 243]}\n"
        "fup-beta: {N_list: [81, 243, 729, 2187]}\n"
        "words-count: {log_inv_h_list: [60, 80, 100, 120], enumeration_max_N0: 3}\n"
        "porosity-check: {random_sets: 2, cantor_depths: [2], x_step: 0.001, length_step: 0.01}\n"
        "tensor-check: {pairs: 2, N: 16, transverse_dim: 4}\n"
    )
    code = main(["all", "--config", str(config), "--output-dir", str(tmp_path), "--quiet"])
    summary = _read_json(tmp_path / "summary.json")
    assert set(summary["criteria"]) == set(ACCEPTANCE)
    assert summary["passed"] == all(summary["criteria"].values())
    assert code == (0 if summary["passed"] else 1)
    assert (tmp_path / "porosity_check.csv").exists()


def test_words_runner_flags_a_growing_tail():
    params = WordsCountParams(alpha=0.9, log_inv_h_list=[float(x) for x in range(60, 241, 20)], enumeration_max_N0=2)
    result = run_words_count(params)
    assert result.criteria["count_bound_constant_nonincreasing"] is False
    assert result.criteria["count_bound_bounded"] is False
    assert "C_h" in result.tables["words_count"].columns


def test_words_count_short_grid_passes(tmp_path):
    assert main(WORDS_ARGS + ["--output-dir", str(tmp_path)]) == 0
    report = _read_json(tmp_path / "words_count.json")
    assert report["bounded"] is True
    assert report["constant"] == pytest.approx(22 ** 4 * math.exp(-14.0))


def test_runner_error_is_a_failed_run_not_a_usage_error(tmp_path, monkeypatch):
    def broken(params):
        raise ValueError("solver did not converge")

    monkeypatch.setitem(RUNNERS, "words-count", broken)
    assert main(WORDS_ARGS + ["--output-dir", str(tmp_path)]) == 1
    # Invalid parameters are still rejected before the runner is reached.
    assert main(["words-count", "--alpha", "1.5", "--output-dir", str(tmp_path), "--quiet"]) == 2


def test_porosity_check_reads_interval_files(tmp_path):
    path = tmp_path / "sparse.txt"
    write_porous_set(PorousSet([[0.0, 0.01], [0.2, 0.21], [0.4, 0.41]]), path)
    out = tmp_path / "out"
    args = ["porosity-check", "--sets", "1", "--x-step", "0.001", "--set-file", str(path)]
    assert main(args + ["--output-dir", str(out), "--quiet"]) in (0, 1)

    df = pd.read_csv(out / "porosity_check.csv")
    row = df[df["set_id"] == "file-sparse"].iloc[0]
    assert row["intervals"] == 3
    assert bool(row["exact"]) and bool(row["grid_oracle"])
    report = _read_json(out / "porosity_check.json")
    assert report["rows"] == len(df)


def test_missing_interval_file_is_a_usage_error(tmp_path):
    args = ["porosity-check", "--set-file", str(tmp_path / "missing.txt"), "--output-dir", str(tmp_path), "--quiet"]
    assert main(args) == 2
    assert not (tmp_path / "porosity_check.json").exists()
