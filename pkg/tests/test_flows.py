"""
tests/test_flows.py

Sphere bundle points, the geodesic/horocycle flows and the frame pushforward:
- flows are right translations, so they compose additively and satisfy the horocycle conjugation rule
- the pushforward scales the frame by e^{+/-2t}, e^{+/-t}, 1 and agrees with finite differences
- the distance proxy is a metric and, measured after recentering, has unit speed along the geodesic flow
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from src.flows.bundle import (
    SphereBundlePoint,
    act,
    base_point,
    bundle_distance,
    distance_calibration,
    geodesic_flow,
    horocycle_flow,
    pairwise_bundle_distances,
    phase_rotate,
    recentered_distance,
)
from src.flows.frame import (
    FrameTangent,
    expansion_factors,
    finite_difference_pushforward,
    frame_indices,
    frame_norm,
    pushforward_frame,
)
from src.minkowski.groups import exp_algebra
from src.minkowski.lie_algebra import random_algebra_element
from src.minkowski.space import minkowski_inner


@pytest.fixture
def q():
    # A generic point: the base point moved by a fixed random isometry.
    rng = np.random.default_rng(11)
    return act(exp_algebra(random_algebra_element(3, rng, scale=0.4)), base_point(3))


def test_base_point_is_e0_e1():
    p = base_point(2)
    assert np.allclose(p.z, [1, 0, 0])
    assert np.allclose(p.v, [0, 1, 0])


def test_invalid_points_are_rejected():
    p = base_point(2)
    with pytest.raises(ValueError):
        SphereBundlePoint(z=p.v, v=p.z, lift=p.lift)


def test_flow_time_must_be_finite(q):
    with pytest.raises(ValueError):
        geodesic_flow(q, math.inf)
    with pytest.raises(ValueError):
        horocycle_flow(q, math.nan, "+")


def test_geodesic_flow_is_a_one_parameter_group(q):
    a = geodesic_flow(geodesic_flow(q, 0.7), 1.1)
    b = geodesic_flow(q, 1.8)
    assert np.allclose(a.lift.matrix, b.lift.matrix, atol=1e-10)


def test_flow_preserves_the_bundle_relations(q):
    p = horocycle_flow(geodesic_flow(q, 2.0), 0.5, "+")
    assert abs(minkowski_inner(p.z, p.z) + 1) < 1e-9
    assert abs(minkowski_inner(p.z, p.v)) < 1e-9
    assert abs(minkowski_inner(p.v, p.v) - 1) < 1e-9


@pytest.mark.parametrize("t", [0.5, 2.0])
def test_horocycle_conjugation(q, t):
    # phi^t h^-_s = h^-_{s e^{2t}} phi^t
    s = 0.3
    lhs = geodesic_flow(horocycle_flow(q, s, "-"), t)
    rhs = horocycle_flow(geodesic_flow(q, t), s * math.exp(2 * t), "-")
    assert np.allclose(lhs.lift.matrix, rhs.lift.matrix, rtol=1e-12, atol=1e-10)


def test_distance_ignores_the_phase(q):
    assert bundle_distance(q, phase_rotate(q, 1.2)) < 1e-6


def test_pairwise_distances_match_single_distance(q):
    p = geodesic_flow(q, 0.3)
    mat = pairwise_bundle_distances([q, p])
    assert np.isclose(mat[0, 1], bundle_distance(q, p))
    assert np.allclose(np.diag(mat), 0.0, atol=1e-6)


def test_distance_has_unit_speed_along_the_flow(q):
    assert abs(distance_calibration(q) - 1.0) <= 0.05
    assert abs(distance_calibration(base_point(3)) - 1.0) <= 0.05


def test_recentered_distance_is_invariant_under_isometries(q):
    rng = np.random.default_rng(5)
    g = exp_algebra(random_algebra_element(3, rng, scale=0.5))
    p = horocycle_flow(geodesic_flow(q, 0.2), 0.1, "+")
    before = recentered_distance(q, p)
    assert recentered_distance(act(g, q), act(g, p)) == pytest.approx(before, rel=1e-8)
    # At the base point both distances agree.
    b = base_point(3)
    assert recentered_distance(b, geodesic_flow(b, 0.2)) == pytest.approx(bundle_distance(b, geodesic_flow(b, 0.2)))


def test_bundle_distance_is_a_symmetric_metric_on_random_triples():
    rng = np.random.default_rng(8)
    for _ in range(20):
        a, b, c = (act(exp_algebra(random_algebra_element(2, rng, scale=0.6)), base_point(2)) for _ in range(3))
        assert bundle_distance(a, b) == pytest.approx(bundle_distance(b, a), rel=1e-9, abs=1e-9)
        assert bundle_distance(a, c) <= bundle_distance(a, b) + bundle_distance(b, c) + 1e-9


def test_expansion_factors():
    idx = frame_indices(2)
    f = expansion_factors(2, 1.0)
    assert np.isclose(f[idx.x], 1.0)
    assert np.isclose(f[idx.v_minus], math.e ** 2)
    assert np.isclose(f[idx.v_plus], math.e ** -2)
    assert np.allclose(f[list(idx.e_minus)], math.e)
    assert np.allclose(f[list(idx.e_plus)], 1 / math.e)


@pytest.mark.parametrize("label", ["X", "V-", "V+", "W-_2", "Z+_3"])
def test_pushforward_matches_finite_differences(q, label):
    w = FrameTangent.unit(q, label)
    exact = pushforward_frame(w, 1.0)
    measured = finite_difference_pushforward(w, 1.0, step=1e-6)
    assert np.max(np.abs(exact.coeffs - measured.coeffs)) / frame_norm(exact) <= 1e-4


def test_unknown_frame_label(q):
    with pytest.raises(ValueError):
        FrameTangent.unit(q, "W-_9")


def test_point_json_encoding(q):
    back = SphereBundlePoint.from_json(q.to_json())
    assert np.allclose(back.z, q.z)
    assert np.allclose(back.v, q.v)
