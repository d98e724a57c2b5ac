import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qha.calculus import (MAX_ORDER, MultiIndex, ck_norm, derivative, derivative_table,
                          multi_indices, op_norm, schatten_norm, sobolev_norm, sup_derivatives,
                          symbol_derivative, verify_derivative_algebra)
from qha.families import ground_state_projector, localized_random_operator
from qha.phase_space import PhaseGrid, Symbol, make_symbol
from qha.quantize import op_weyl
from qha.weyl_system import OperatorRep


def test_multi_indices_counts():
    assert len(multi_indices(2, 3)) == math.comb(5, 2)
    assert len(multi_indices(4, 2, 1)) == 4 + 10
    orders = [a.order for a in multi_indices(2, 4)]
    assert orders == sorted(orders)


def test_multi_index_arithmetic():
    a, b = MultiIndex((2, 1)), MultiIndex((1, 0))
    assert (a - b) == MultiIndex((1, 1)) and (b + b) == MultiIndex((2, 0))
    assert b <= a and not a <= b
    assert a.factorial() == 2 and a.directions() == [0, 0, 1]
    with pytest.raises(ValueError):
        MultiIndex((-1, 0))


def test_derivative_of_identity_vanishes(grid):
    I = OperatorRep.identity(grid)
    for j in range(2):
        e = np.eye(2, dtype=int)[j]
        assert np.abs(derivative(I, e).matrix).max() == 0.0
        assert np.abs(derivative(I, e, "finite_diff").matrix).max() < 1e-10


def test_finite_difference_matches_commutator(grid, rng):
    A = localized_random_operator(grid, rng)
    for j in range(2):
        e = np.eye(2, dtype=int)[j]
        exact = derivative(A, e).matrix
        assert np.abs(derivative(A, e, "finite_diff").matrix - exact).max() < 1e-5


def test_step_halving_ratio_is_second_order(grid, rng):
    A = localized_random_operator(grid, rng)
    t = 0.4 * min(grid.h, grid.dxi)
    for j in range(2):
        e = np.eye(2, dtype=int)[j]
        exact = derivative(A, e).matrix
        e1 = np.abs(derivative(A, e, "finite_diff", step=t, richardson=0).matrix - exact).max()
        e2 = np.abs(derivative(A, e, "finite_diff", step=t / 2, richardson=0).matrix - exact).max()
        assert 3.0 <= e1 / e2 <= 5.0


def test_derivative_argument_errors(grid):
    I = OperatorRep.identity(grid)
    with pytest.raises(ValueError):
        derivative(I, (MAX_ORDER + 1, 0))
    with pytest.raises(ValueError):
        derivative(I, (1, 0), scheme="spline")
    with pytest.raises(ValueError):
        derivative(I, (1, 0), scheme="finite_diff", step=1e-12)
    with pytest.raises(ValueError):
        derivative(I, (1, 0, 0))


def test_derivative_intertwines_with_quantization(grid):
    f = make_symbol("gaussian", grid, width=1.0)
    tab = derivative_table(op_weyl(f), 3)
    for a, D in tab.items(3):
        target = (-1) ** a.order * op_weyl(symbol_derivative(f, a)).matrix
        assert np.abs(D.matrix - target).max() < 1e-8


def test_mixed_partials_commute(grid, rng):
    A = localized_random_operator(grid, rng)
    xy = derivative(derivative(A, (1, 0)), (0, 1)).matrix
    yx = derivative(derivative(A, (0, 1)), (1, 0)).matrix
    assert np.abs(xy - yx).max() < 1e-10


def test_ck_norm_of_identity_and_monotonicity(grid, rng):
    assert ck_norm(derivative_table(OperatorRep.identity(grid), 2), 2) == pytest.approx(1.0)
    tab = derivative_table(localized_random_operator(grid, rng), 3)
    vals = [ck_norm(tab, k) for k in range(4)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        ck_norm(tab, 4)


def test_sobolev_norms(grid):
    zero = Symbol(grid, np.zeros(grid.shape))
    assert sobolev_norm(zero, 2, 2) == 0.0
    f = make_symbol("gaussian", grid, width=1.0)
    # ||f||_2 = sqrt(pi), each first partial has norm sqrt(pi / 2)
    expected = np.sqrt(np.pi) + 2 * np.sqrt(np.pi / 2)
    assert sobolev_norm(f, 1, 2) == pytest.approx(expected, rel=1e-10)
    with pytest.raises(ValueError):
        sobolev_norm(f, 1, 0.5)


def test_sup_derivatives_of_gaussian(grid):
    f = make_symbol("gaussian", grid, width=1.0)
    assert sup_derivatives(f, 0) == pytest.approx(1.0)
    # max |x e^{-x^2/2}| = e^{-1/2}
    assert sup_derivatives(f, 1) == pytest.approx(1.0)
    assert symbol_derivative(f, (1, 0)).max_abs() == pytest.approx(np.exp(-0.5), rel=1e-3)


def test_schatten_norms(grid, rng):
    P = ground_state_projector(grid)
    for p in (1, 2, np.inf):
        assert schatten_norm(P, p) == pytest.approx(1.0, rel=1e-10)
    A = localized_random_operator(grid, rng)
    assert schatten_norm(A, 2) == pytest.approx(np.linalg.norm(A.matrix))
    Q, _ = np.linalg.qr(rng.normal(size=(grid.dim, grid.dim)))
    U = OperatorRep(grid, Q)
    for p in (1, 3, np.inf):
        assert schatten_norm(U @ A @ U.H, p) == pytest.approx(schatten_norm(A, p), rel=1e-10)
    with pytest.raises(ValueError):
        schatten_norm(A, 0.5)


@pytest.mark.parametrize("direction", [0, 1])
def test_derivative_algebra_rules(grid, rng, direction):
    A = localized_random_operator(grid, rng)
    B = OperatorRep.identity(grid) + 0.3 * localized_random_operator(grid, rng)
    rep = verify_derivative_algebra(A, B, direction)
    assert rep.passed, rep.failures()
    rep = verify_derivative_algebra(A, B, direction, scheme="commutator", tolerance=1e-10)
    assert rep.passed, rep.failures()


def test_derivative_algebra_skips_singular_denominator(grid, rng):
    A = localized_random_operator(grid, rng)
    rep = verify_derivative_algebra(A, ground_state_projector(grid), scheme="commutator")
    names = [e.name for e in rep.entries]
    assert "inverse_rules_skipped_condition_number" in names and "inverse_rule" not in names


def test_inverse_of_smooth_operator_stays_smooth(grid, rng):
    A = OperatorRep.identity(grid) + 0.3 * localized_random_operator(grid, rng, hermitian=True)
    tab = derivative_table(A.inverse(), 2)
    assert np.isfinite(ck_norm(tab, 2)) and ck_norm(tab, 2) < 10 * op_norm(A.inverse())


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2))
def test_symbol_derivative_matches_monomial_rule(a, b):
    g = PhaseGrid(1, 64, 16.0)
    f = make_symbol("gaussian", g, width=1.0)
    x, xi = g.mesh()
    herm = {0: lambda t: 1, 1: lambda t: -t, 2: lambda t: t ** 2 - 1}
    expected = herm[a](x) * herm[b](xi) * f.values
    assert np.abs(symbol_derivative(f, (a, b)).values - expected).max() < 1e-9
