"""
tests/test_fup_norms.py

Norms of Fourier operators restricted to porous sets:
- trivial cases (full and empty sets, single points)
- dense SVD against matrix-free power iteration
- Frobenius bounds, monotonicity on nested sets and the tensor factorization
- the continuous operator: reflection symmetry and the prolate value on the unit box
- parameter validation and the log-log decay fit
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.signal.windows import dpss

from src.fup.continuous import continuous_frobenius_bound, continuous_norm
from src.fup.discrete import (
    DiscreteSet,
    cantor_discrete,
    dft_submatrix,
    discrete_norm,
    frobenius_bound,
    norm_sweep,
    tensor_factor_check,
)
from src.fup.params import FupParams, fup_scale_exponents, porosity_window_for_h
from src.fup.porous import PorousSet, cantor_iterate
from src.fup.regression import beta_regression


def test_cantor_discrete_matches_interval_version():
    dset = cantor_discrete(2)
    assert dset.indices.tolist() == [0, 2, 6, 8]
    from_intervals = DiscreteSet.from_porous_set(cantor_iterate(3, {0, 2}, 2), 9)
    assert np.array_equal(from_intervals.mask, dset.mask)
    assert np.allclose(dset.to_porous_set().intervals, cantor_iterate(3, {0, 2}, 2).intervals)


def test_dft_is_unitary():
    f = dft_submatrix(np.arange(16), np.arange(16), 16)
    assert np.allclose(f @ f.conj().T, np.eye(16), atol=1e-12)


@pytest.mark.parametrize("method", ["dense-svd", "power-iteration"])
def test_full_and_empty_sets(method):
    full = DiscreteSet.full(64)
    empty = DiscreteSet(64, np.zeros(64, dtype=bool))
    assert discrete_norm(full, full, method=method).value == pytest.approx(1.0, abs=1e-10)
    assert discrete_norm(empty, full, method=method).value == 0.0


def test_single_points():
    # A single entry of the unitary DFT has modulus N^{-1/2}.
    a = DiscreteSet.from_indices(81, [5])
    b = DiscreteSet.from_indices(81, [40])
    assert discrete_norm(a, b).value == pytest.approx(1 / 9)


def test_power_iteration_agrees_with_dense_svd():
    cantor = cantor_discrete(5)
    dense = discrete_norm(cantor, cantor, method="dense-svd")
    power = discrete_norm(cantor, cantor, method="power-iteration")
    assert power.value == pytest.approx(dense.value, abs=1e-8)


@pytest.mark.parametrize("depth", [6, 7])
def test_power_iteration_agrees_with_dense_svd_on_larger_grids(depth):
    cantor = cantor_discrete(depth)
    dense = discrete_norm(cantor, cantor, method="dense-svd")
    power = discrete_norm(cantor, cantor, method="power-iteration")
    assert power.converged
    assert power.value == pytest.approx(dense.value, abs=1e-7)


def test_discrete_norm_is_monotone_on_nested_sets():
    n = 3 ** 6
    # Cantor generations seen on one grid form a decreasing family.
    family = [DiscreteSet.from_porous_set(cantor_iterate(3, {0, 2}, d), n) for d in range(1, 7)]
    values = [discrete_norm(s, s).value for s in family]
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    rng = np.random.default_rng(6)
    outer = DiscreteSet(n, rng.random(n) < 0.5)
    inner = DiscreteSet(n, outer.mask & (rng.random(n) < 0.5))
    plus = cantor_discrete(6)
    assert discrete_norm(inner, plus).value <= discrete_norm(outer, plus).value + 1e-12


def test_cantor_norms_decay_and_respect_frobenius():
    values = []
    for depth in (3, 4, 5, 6):
        cantor = cantor_discrete(depth)
        value = discrete_norm(cantor, cantor).value
        assert value <= frobenius_bound(cantor, cantor) + 1e-12
        values.append(value)
    assert all(b < a for a, b in zip(values, values[1:]))


def test_grid_size_mismatch():
    with pytest.raises(ValueError):
        discrete_norm(DiscreteSet.full(8), DiscreteSet.full(9))


def test_norm_sweep_preserves_order():
    pairs = [(cantor_discrete(d), cantor_discrete(d)) for d in (2, 3, 4)]
    sequential = [r.value for r in norm_sweep(pairs)]
    threaded = [r.value for r in norm_sweep(pairs, workers=3)]
    assert threaded == sequential


def test_tensor_factorization():
    rng = np.random.default_rng(1)
    minus = DiscreteSet(16, rng.random(16) < 0.5)
    plus = DiscreteSet(16, rng.random(16) < 0.5)
    check = tensor_factor_check(minus, plus, 4, tol=1e-8)
    assert check.agrees
    assert check.norm_2d == pytest.approx(check.norm_1d, abs=1e-8)


def test_continuous_norm_bounds():
    omega = cantor_iterate(3, {0, 2}, 2)
    h = 0.05
    value = continuous_norm(omega, omega, h, quad_points=1024).value
    assert 0.0 < value <= 1.0 + 1e-9
    assert value <= continuous_frobenius_bound(omega, omega, h) + 1e-9
    assert continuous_norm(PorousSet.empty(), omega, h).value == 0.0


def test_continuous_norm_is_symmetric_under_reflection():
    minus = PorousSet([[0.1, 0.3], [0.5, 0.55], [0.8, 0.95]])
    plus = PorousSet([[0.0, 0.2], [0.6, 0.7]])

    def reflect(omega):
        return PorousSet(-omega.intervals[::-1, ::-1], bounds=(-1.0, 0.0))

    value = continuous_norm(minus, plus, 0.05).value
    assert continuous_norm(reflect(minus), reflect(plus), 0.05).value == pytest.approx(value, rel=1e-9)


def test_continuous_norm_of_the_unit_box():
    box = PorousSet([[0.0, 1.0]])
    # On [0, 1] x [0, 1] the squared norm is the top prolate concentration ratio with time-bandwidth 1/(4h).
    h = 0.1
    _, ratio = dpss(2048, 1 / (4 * np.pi * h), Kmax=1, return_ratios=True)
    value = continuous_norm(box, box, h, quad_points=2048).value
    assert value == pytest.approx(math.sqrt(ratio[0]), abs=2e-3)
    # Larger boxes in units of h approach unitarity.
    assert continuous_norm(box, box, 0.05, quad_points=2048).value == pytest.approx(1.0, abs=2e-2)


def test_continuous_quadrature_must_resolve_h():
    omega = PorousSet([[0.0, 1.0]])
    with pytest.raises(ValueError):
        continuous_norm(omega, omega, 0.01, quad_points=100)


def test_scale_exponents():
    rho, g0, g1 = fup_scale_exponents(0.1)
    assert rho == pytest.approx(0.6)
    assert g0 == pytest.approx(0.55)
    assert g1 == 0.0
    assert porosity_window_for_h(0.01, 0.5, 0.0) == pytest.approx((0.1, 1.0))


def test_fup_params_validation():
    params = FupParams(N=81, eps0=0.1, nu=0.1, alpha0=0.01, alpha1=1.0)
    assert params.h == pytest.approx(1 / 81)
    assert params.scale_window() == pytest.approx((81 ** -0.55, 1.0))
    with pytest.raises(ValidationError):
        FupParams(N=81, h=0.5, eps0=0.1, nu=0.1, alpha0=0.01, alpha1=1.0)
    with pytest.raises(ValidationError):
        FupParams(h=0.01, eps0=0.3, nu=0.1, alpha0=0.01, alpha1=1.0)
    with pytest.raises(ValidationError):
        FupParams(h=0.01, gamma0=0.4, gamma1=0.0, nu=0.1, alpha0=0.01, alpha1=1.0)


def test_beta_regression_on_a_power_law():
    samples = [(h, 3.0 * h ** 0.25) for h in (1e-1, 1e-2, 1e-3, 1e-4)]
    fit = beta_regression(samples)
    assert fit.beta_hat == pytest.approx(0.25)
    assert fit.log_C == pytest.approx(math.log(3.0))
    assert fit.r_squared == pytest.approx(1.0)


def test_beta_regression_edge_cases():
    flat = beta_regression([(h, 0.5) for h in (1e-1, 1e-2, 1e-3, 1e-4)])
    assert flat.beta_hat == 0.0 and flat.r_squared == 1.0
    with pytest.raises(ValueError):
        beta_regression([(0.1, 1.0), (0.01, 0.5)])
    with pytest.raises(ValueError):
        beta_regression([(0.1, 1.0)] * 4)
    with pytest.raises(ValueError):
        beta_regression([(0.1, 0.0), (0.01, 0.5), (0.001, 0.2), (1e-4, 0.1)])
