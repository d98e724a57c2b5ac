import numpy as np
import pytest

from qha.analytic import (analyticity_fit, compose_series, cos_sin_derivative_norms,
                          evaluate_series, invert_series, remainder_ratio, series_coefficients,
                          symbol_derivative_norms, taylor_remainder)
from qha.calculus import MultiIndex, multi_indices
from qha.families import localized_random_operator
from qha.phase_space import Symbol, make_symbol
from qha.quantize import op_weyl
from qha.weyl_system import OperatorRep, op_shift


def test_zero_symbol_has_zero_constant(grid):
    fit = analyticity_fit(symbol_derivative_norms(Symbol(grid, np.zeros(grid.shape)), 6))
    assert fit.C == 0.0


def test_empty_or_short_tables_are_rejected():
    with pytest.raises(ValueError):
        analyticity_fit({})
    with pytest.raises(ValueError):
        analyticity_fit(cos_sin_derivative_norms(1, 3))
    with pytest.raises(TypeError):
        analyticity_fit([1.0, 2.0])


def test_cos_sin_closed_form():
    norms = cos_sin_derivative_norms(1, 8)
    assert max(abs(v - 1.0) for v in norms.values()) < 1e-10
    fit = analyticity_fit(norms)
    assert fit.C_at(1.0) == pytest.approx(1.0, abs=1e-10)
    assert fit.stabilized and fit.R >= 1.0
    assert set(fit.to_dict()) >= {"C", "R", "orders_used", "per_order_slack"}


def test_identity_series(grid):
    coeffs = series_coefficients(OperatorRep.identity(grid), 3)
    for a, B in coeffs.items():
        expected = np.eye(grid.dim) if a.order == 0 else 0.0
        assert np.abs(B.matrix - expected).max() < 1e-12


def test_geometric_series_inversion(small_grid):
    c = 0.3
    I = OperatorRep.identity(small_grid)
    e = MultiIndex((1, 0))
    zero = MultiIndex((0, 0))
    b = invert_series({zero: I, e: c * I}, 6)
    for a, B in b.items():
        expected = (-c) ** a.entries[0] if a.entries[1] == 0 else 0.0
        assert np.abs(B.matrix - expected * np.eye(small_grid.dim)).max() < 1e-12


def test_singular_leading_coefficient_rejected(small_grid):
    with pytest.raises(ValueError):
        invert_series({MultiIndex((0, 0)): OperatorRep.zero(small_grid)}, 2)


def test_inverse_series_matches_series_of_inverse(grid, rng):
    B = OperatorRep.identity(grid) + 0.3 * localized_random_operator(grid, rng)
    order = 3
    inv = invert_series(series_coefficients(B, order), order)
    direct = series_coefficients(B.inverse(), order)
    for a in multi_indices(2, order):
        assert np.abs(inv[a].matrix - direct[a].matrix).max() < 1e-8
    prod = compose_series(series_coefficients(B, order), inv, order)
    for a, P in prod.items():
        expected = np.eye(grid.dim) if a.order == 0 else 0.0
        assert np.abs(P.matrix - expected).max() < 1e-8


def test_taylor_remainder_is_third_order(grid, rng):
    A = localized_random_operator(grid, rng)
    for direction in ([1.0, 0.0], [0.0, 1.0], [0.6, 0.8]):
        assert 6.0 <= remainder_ratio(A, direction) <= 10.0


def test_series_reproduces_shift_at_small_z(grid, rng):
    A = localized_random_operator(grid, rng)
    coeffs = series_coefficients(A, 4)
    z = np.array([0.05, -0.03])
    approx = evaluate_series(coeffs, z)
    from qha.phase_space import PhasePoint
    exact = op_shift(A, PhasePoint.from_vector(z))
    assert np.abs(approx.matrix - exact.matrix).max() < 1e-6
    assert taylor_remainder(A, z, 4, coeffs) < 1e-6


def test_operator_fit_for_quantized_cos_sin(grid):
    from qha.calculus import derivative_table
    fit = analyticity_fit(derivative_table(op_weyl(make_symbol("cos_sin", grid)), 6))
    assert fit.C > 0 and fit.R > 0 and np.isfinite(fit.C)
