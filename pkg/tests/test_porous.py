"""
tests/test_porous.py

Interval-union porous sets: validation, the exact porosity decision and its grid oracle,
the Cantor and gap constructions, thickening, diffeomorphic images and the text file format.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from src.fup.io import read_porous_set, write_porous_set
from src.fup.porous import (
    DiffeoBounds,
    PorousSet,
    cantor_iterate,
    diffeo_image,
    diffeo_porosity_window,
    free_length,
    gap_construction,
    grid_porosity_scan,
    is_porous,
    thicken,
    thicken_porosity_window,
)


def _assert_witness_fails(omega, nu, result):
    x, y = result.witness
    assert free_length(omega, x, y - x)[0] < nu * (y - x)


def test_intervals_must_be_sorted_and_disjoint():
    with pytest.raises(ValueError):
        PorousSet([[0.0, 0.5], [0.4, 0.6]])
    with pytest.raises(ValueError):
        PorousSet([[0.5, 0.5]])
    with pytest.raises(ValueError):
        PorousSet([[0.5, 1.5]])


def test_from_unsorted_merges():
    omega = PorousSet.from_unsorted([[0.6, 0.7], [0.1, 0.3], [0.2, 0.4]])
    assert omega.count == 2
    assert np.allclose(omega.intervals, [[0.1, 0.4], [0.6, 0.7]])
    assert math.isclose(omega.measure(), 0.4)
    assert omega.contains([0.15, 0.5, 0.7]).tolist() == [True, False, True]


def test_empty_set_is_porous():
    assert is_porous(PorousSet.empty(), 0.1, 0.01, 1.0)


def test_full_interval_is_not_porous():
    omega = PorousSet([[0.0, 1.0]])
    result = is_porous(omega, 0.1, 0.1, 0.5)
    assert not result
    _assert_witness_fails(omega, 0.1, result)


def test_cantor_iterate_structure():
    omega = cantor_iterate(3, {0, 2}, 2)
    assert np.allclose(omega.intervals * 9, [[0, 1], [2, 3], [6, 7], [8, 9]])
    with pytest.raises(ValueError):
        cantor_iterate(3, {0, 1, 2}, 2)


def test_cantor_porosity_window():
    omega = cantor_iterate(3, {0, 2}, 3)
    # Porous down to the scale of the previous generation, but an interval equal to a component fails.
    assert is_porous(omega, 0.1, 1 / 9, 1.0)
    result = is_porous(omega, 0.1, 1 / 27, 1.0)
    assert not result
    _assert_witness_fails(omega, 0.1, result)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_grid_oracle_never_contradicts_exact_decision(seed):
    rng = np.random.default_rng(seed)
    ends = np.sort(rng.uniform(0, 1, size=8))
    omega = PorousSet.from_unsorted(ends.reshape(-1, 2))
    exact = is_porous(omega, 0.1, 0.05, 0.5)
    oracle = grid_porosity_scan(omega, 0.1, 0.05, 0.5, x_step=1e-3, length_step=1e-2)
    # The oracle only tests genuine intervals: if it finds a failure, so does the exact scan.
    if not oracle:
        assert not exact
    if not exact:
        _assert_witness_fails(omega, 0.1, exact)


@pytest.mark.parametrize(
    "intervals, porous",
    [
        ([[0.0, 1.0]], False),
        ([[0.0, 0.3], [0.7, 1.0]], False),
        ([[0.0, 0.01], [0.2, 0.21], [0.4, 0.41], [0.6, 0.61], [0.8, 0.81]], True),
    ],
)
def test_grid_oracle_agrees_with_exact_decision(intervals, porous):
    omega = PorousSet(intervals)
    assert bool(is_porous(omega, 0.1, 0.05, 0.5)) is porous
    assert grid_porosity_scan(omega, 0.1, 0.05, 0.5, x_step=1e-3, length_step=1e-2) is porous


@pytest.mark.parametrize("alpha0, porous", [(1 / 9, True), (1 / 27, False)])
def test_grid_oracle_agrees_on_cantor_windows(alpha0, porous):
    omega = cantor_iterate(3, {0, 2}, 3)
    assert bool(is_porous(omega, 0.1, alpha0, 1.0)) is porous
    assert grid_porosity_scan(omega, 0.1, alpha0, 1.0, x_step=1e-3, length_step=1e-2) is porous


def test_porosity_parameters_are_validated():
    with pytest.raises(ValueError):
        is_porous(PorousSet.empty(), 1.5, 0.1, 1.0)
    with pytest.raises(ValueError):
        is_porous(PorousSet.empty(), 0.1, 0.5, 0.1)


def test_gap_construction_depth_one():
    omega, nu_prime = gap_construction(1.0, 0.5, 1)
    assert math.isclose(nu_prime, 0.5 * math.exp(-2))
    expected = [[0, 0.0625], [0.1875, 0.25], [0.75, 0.8125], [0.9375, 1.0]]
    assert np.allclose(omega.intervals, expected)


def test_gap_construction_is_porous():
    omega, nu_prime = gap_construction(1.0, 0.5, 2)
    assert is_porous(omega, nu_prime, math.exp(-4), 1.0)


def test_thickening_keeps_a_third_of_the_porosity():
    omega, nu = gap_construction(1.0, 0.5, 2)
    a0 = math.exp(-4)
    alpha = nu * a0 / 3
    window = thicken_porosity_window(nu, a0, 1.0, alpha)
    assert window == pytest.approx((nu / 3, a0, 1.0))
    assert is_porous(thicken(omega, alpha), *window)


def test_thicken_edge_cases():
    omega = PorousSet([[0.2, 0.3], [0.35, 0.5]])
    assert thicken(omega, 0.0) is omega
    merged = thicken(omega, 0.03)
    assert merged.count == 1
    assert np.allclose(merged.intervals, [[0.17, 0.53]])
    with pytest.raises(ValueError):
        thicken(omega, -0.1)


def test_diffeomorphic_image_stays_porous():
    omega, nu = gap_construction(1.0, 0.5, 2)
    bounds = DiffeoBounds(0.95, 1.05, math.pi / 10)
    image = diffeo_image(omega, lambda x: x + np.sin(2 * np.pi * x) / (40 * np.pi), bounds)
    window = diffeo_porosity_window(nu, math.exp(-4), 1.0, bounds)
    assert is_porous(image, *window)
    assert is_porous(image, nu / 2, window[1], window[2])


def test_diffeo_bounds_are_checked():
    omega = PorousSet([[0.2, 0.4]])
    with pytest.raises(ValueError):
        diffeo_image(omega, lambda x: 2 * x, DiffeoBounds(0.5, 1.5, 0.0))
    with pytest.raises(ValueError):
        diffeo_image(omega, lambda x: (x - 0.5) ** 2, DiffeoBounds(0.01, 2.0, 2.0))


def test_decreasing_map_reverses_intervals():
    omega = PorousSet([[0.1, 0.2], [0.5, 0.9]])
    image = diffeo_image(omega, lambda x: 1.0 - x, DiffeoBounds(1.0, 1.0, 0.0))
    assert np.allclose(image.intervals, [[0.1, 0.5], [0.8, 0.9]])


def test_free_length():
    omega = PorousSet([[0.2, 0.4]])
    assert np.allclose(free_length(omega, [0.0, 0.25], 0.3), [0.2, 0.15])


def test_text_file_round_trip(tmp_path):
    omega = cantor_iterate(3, {0, 2}, 3)
    path = tmp_path / "cantor.txt"
    write_porous_set(omega, path)
    back = read_porous_set(path)
    assert np.array_equal(back.intervals, omega.intervals)


def test_text_file_round_trip_is_exact_for_arbitrary_floats(tmp_path):
    rng = np.random.default_rng(3)
    omega = PorousSet.from_unsorted(np.sort(rng.uniform(0, 1, size=40)).reshape(-1, 2))
    path = tmp_path / "random.txt"
    write_porous_set(omega, path)
    assert np.array_equal(read_porous_set(path).intervals, omega.intervals)


def test_text_file_comments_and_empty(tmp_path):
    path = tmp_path / "set.txt"
    path.write_text("# two intervals\n0.1 0.2\n0.5   0.75\n")
    assert read_porous_set(path).count == 2
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    assert read_porous_set(empty).count == 0
