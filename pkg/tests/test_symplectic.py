"""
tests/test_symplectic.py

Chart coordinates on T*CH^n, the canonical form in the chart and the straightening map.
The finite-difference form is compared against the closed form obtained from brackets.
"""

from __future__ import annotations

import numpy as np
import pytest

from src.flows.bundle import act, base_point
from src.minkowski.groups import exp_algebra
from src.minkowski.lie_algebra import random_algebra_element
from src.symplectic.chart import (
    ChartCoords,
    CotangentPoint,
    chart_to_point,
    cotangent_distance,
    flow_cotangent,
    point_to_chart,
)
from src.symplectic.form import (
    dilation_flow_pairing,
    exact_symplectic_form,
    fd_convergence_ratio,
    lagrangian_residuals,
    pairing_residuals,
    symplectic_form_at,
)
from src.symplectic.straighten import image_residuals, standard_symplectic_matrix, straighten


@pytest.fixture(scope="module")
def base() -> CotangentPoint:
    rng = np.random.default_rng(3)
    q = act(exp_algebra(random_algebra_element(2, rng, scale=0.3)), base_point(2))
    return CotangentPoint(q, 1.5)


def test_tau_must_be_positive():
    with pytest.raises(ValueError):
        CotangentPoint(base_point(2), 0.0)


def test_chart_origin_is_the_base(base):
    p = chart_to_point(base, ChartCoords.zero(2))
    assert cotangent_distance(p, base) < 1e-6


def test_chart_inversion(base):
    rng = np.random.default_rng(5)
    c = ChartCoords(0.05 * rng.normal(size=7), 0.1)
    back = point_to_chart(base, chart_to_point(base, c))
    assert np.allclose(back.as_vector(), c.as_vector(), atol=1e-7)


def test_chart_radius_is_enforced(base):
    with pytest.raises(ValueError):
        chart_to_point(base, ChartCoords(np.full(7, 0.3), 0.0))


def test_flow_keeps_tau(base):
    assert flow_cotangent(base, 2.0).tau == base.tau


def test_exact_form_pairings(base):
    form = exact_symplectic_form(base)
    assert max(pairing_residuals(form).values()) <= 1e-12
    assert max(lagrangian_residuals(form).values()) <= 1e-12
    # omega(d/du, X) = tau
    assert np.isclose(dilation_flow_pairing(form), base.tau)


def test_fd_form_matches_exact_form(base):
    fd = symplectic_form_at(base, fd_step=1e-4)
    exact = exact_symplectic_form(base)
    assert np.max(np.abs(fd.omega - exact.omega)) <= 1e-6
    assert max(pairing_residuals(fd).values()) <= 1e-6


def test_fd_scheme_is_second_order(base):
    ratio = fd_convergence_ratio(base, step=1e-3)
    assert 3.0 <= ratio <= 5.0


def test_fd_step_range(base):
    with pytest.raises(ValueError):
        symplectic_form_at(base, fd_step=1e-2)


def test_straightening_is_symplectic(base):
    smap = straighten(base)
    assert smap.symplectic_residual() <= 1e-8
    assert max(image_residuals(smap).values()) <= 1e-7
    v = np.arange(8, dtype=float)
    assert np.allclose(smap.to_chart(smap.to_straight(v)), v)


def test_standard_matrix_is_antisymmetric():
    j = standard_symplectic_matrix(8)
    assert np.array_equal(j, -j.T)
    assert np.allclose(j @ j, -np.eye(8))
