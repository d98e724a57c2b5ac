import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qha.families import localized_random_operator
from qha.fourier import fourier_weyl, shift_fourier_weyl
from qha.phase_space import PhaseGrid, PhasePoint, symplectic_form
from qha.weyl_system import (OperatorRep, op_modulate, op_shift, parity_conjugate,
                             read_operator_csv, weyl_matrix, weyl_multiplier, weyl_operator,
                             write_operator_csv)

GRID = PhaseGrid(1, 32, 12.0)
nodes = st.lists(st.integers(-16, 15), min_size=2, max_size=2).map(lambda k: GRID.node(k))


def random_op(grid, rng):
    return OperatorRep(grid, rng.normal(size=(grid.dim, grid.dim)) + 1j * rng.normal(size=(grid.dim, grid.dim)))


@pytest.mark.parametrize("tau", [0.0, 0.25, 0.5, 1.0])
def test_weyl_at_origin_is_identity(grid, tau):
    assert np.array_equal(weyl_operator(PhasePoint.zero(), tau, grid).matrix, np.eye(grid.n))


def test_weyl_operators_are_unitary(grid, rng):
    for _ in range(5):
        W = weyl_matrix(grid, PhasePoint.from_vector(rng.normal(size=2)))
        assert np.abs(W @ W.conj().T - np.eye(grid.n)).max() < 1e-12


def test_ccr_on_random_lattice_pairs(grid, rng):
    worst = 0.0
    for _ in range(50):
        z, w = grid.random_node(rng), grid.random_node(rng)
        lhs = weyl_matrix(grid, z) @ weyl_matrix(grid, w)
        rhs = np.exp(0.5j * symplectic_form(z, w)) * weyl_matrix(grid, z + w)
        worst = max(worst, np.abs(lhs - rhs).max())
    assert worst < 1e-9


@pytest.mark.parametrize("tau", [0.0, 0.25, 0.5, 1.0])
def test_tau_multiplier_and_quotient(grid, rng, tau):
    for _ in range(10):
        z, w = grid.random_node(rng), grid.random_node(rng)
        P = weyl_matrix(grid, z, tau) @ weyl_matrix(grid, w, tau) @ weyl_matrix(grid, z + w, tau).conj().T
        m = weyl_multiplier(z, w, tau)
        assert np.abs(P - m * np.eye(grid.n)).max() < 1e-9
        assert abs(m / weyl_multiplier(w, z, tau) - np.exp(1j * symplectic_form(z, w))) < 1e-12


@pytest.mark.parametrize("tau", [0.0, 0.25, 0.5, 1.0])
def test_adjoint_relation(grid, rng, tau):
    for _ in range(10):
        z = grid.random_node(rng)
        assert np.abs(weyl_matrix(grid, z, tau).conj().T - weyl_matrix(grid, -z, 1 - tau)).max() < 1e-10


def test_op_shift_trivial_cases(grid, rng):
    A = random_op(grid, rng)
    assert np.array_equal(op_shift(A, PhasePoint.zero()).matrix, A.matrix)
    z = PhasePoint.from_vector([0.31, -1.7])
    assert np.abs(op_shift(OperatorRep.identity(grid), z).matrix - np.eye(grid.n)).max() < 1e-12


def test_op_shift_independent_of_tau(grid, rng):
    A = random_op(grid, rng)
    for z in (grid.node([3, -5]), PhasePoint.from_vector([0.37, 1.21])):
        ref = op_shift(A, z, 0.5).matrix
        assert np.abs(op_shift(A, z, 0.0).matrix - ref).max() < 1e-10


@settings(max_examples=30, deadline=None)
@given(nodes, nodes)
def test_shift_group_law(z, w):
    A = random_op(GRID, np.random.default_rng(0))
    assert np.abs(op_shift(op_shift(A, w), z).matrix - op_shift(A, z + w).matrix).max() < 1e-9


def test_op_modulate(grid, rng):
    A = random_op(grid, rng)
    assert np.array_equal(op_modulate(A, PhasePoint.zero()).matrix, A.matrix)
    FA = fourier_weyl(A)
    for _ in range(5):
        k = 2 * rng.integers(-16, 16, size=2)
        M = op_modulate(A, grid.node(k))
        assert abs(np.linalg.norm(M.matrix) - np.linalg.norm(A.matrix)) < 1e-10 * np.linalg.norm(A.matrix)
        lhs = fourier_weyl(M).values
        assert np.abs(lhs - shift_fourier_weyl(FA, k).values).max() < 1e-9 * np.abs(FA.values).max()


def test_modulation_of_localized_operator_by_plain_roll(grid, rng):
    # for operators concentrated near the origin the boundary phases are invisible
    A = localized_random_operator(grid, rng)
    FA = fourier_weyl(A).values
    k = np.array([2, -2])
    lhs = fourier_weyl(op_modulate(A, grid.node(k))).values
    assert np.abs(lhs - np.roll(FA, k, axis=(0, 1))).max() < 1e-7


def test_parity(grid, rng):
    A = random_op(grid, rng)
    assert np.array_equal(parity_conjugate(parity_conjugate(A)).matrix, A.matrix)
    assert np.array_equal(parity_conjugate(OperatorRep.identity(grid)).matrix, np.eye(grid.n))
    for _ in range(5):
        z = grid.random_node(rng)
        B = parity_conjugate(weyl_operator(z, grid=grid)).matrix
        Wm = weyl_matrix(grid, -z)
        c = np.trace(B @ Wm.conj().T) / grid.n
        assert abs(abs(c) - 1) < 1e-10
        assert np.abs(B - c * Wm).max() < 1e-10


def test_rank_one_conventions(grid):
    u = np.exp(-grid.x ** 2 / 2) * np.pi ** -0.25
    P = OperatorRep.rank_one(grid, u)
    assert abs(P.trace() - 1) < 1e-12
    assert abs(np.linalg.norm(P.matrix) - 1) < 1e-12
    assert np.abs((P @ P).matrix - P.matrix).max() < 1e-12


def test_operator_csv_round_trip(tmp_path, small_grid, rng):
    A = random_op(small_grid, rng)
    B = read_operator_csv(write_operator_csv(A, tmp_path / "a.csv"))
    assert B.grid == small_grid
    assert np.array_equal(A.matrix, B.matrix)


def test_operator_grid_mismatch(grid, small_grid):
    with pytest.raises(ValueError):
        OperatorRep.identity(grid) @ OperatorRep.identity(small_grid)
