import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qha.families import localized_random_operator, random_band_limited_symbol
from qha.phase_space import PhaseGrid, Symbol, make_symbol, modulate_function, roll_symbol
from qha.quantize import op_weyl
from qha.stft import (WindowSpec, decay_integral, m_inf1_norm, mixed_norm_inf1, stft_function,
                      stft_function_naive, stft_operator, stft_operator_pointwise)
from qha.suites import embedding_constants
from qha.weyl_system import OperatorRep

TINY = PhaseGrid(1, 8, 6.0)
MID = PhaseGrid(1, 32, 10.0)


def full_stft(f, window=WindowSpec()):
    return stft_function(f, window, keep_full=True).full


def test_zero_symbol_and_zero_window():
    zero = Symbol(MID, np.zeros(MID.shape))
    assert m_inf1_norm(zero) == 0.0
    assert m_inf1_norm(OperatorRep.zero(MID)) == 0.0
    f = make_symbol("gaussian", MID)
    with pytest.raises(ValueError):
        stft_function(f, zero)
    with pytest.raises(ValueError):
        stft_operator(op_weyl(f), OperatorRep.zero(MID))


def test_window_spec_validation():
    with pytest.raises(ValueError):
        WindowSpec("box")
    with pytest.raises(ValueError):
        WindowSpec(width=0.0)
    with pytest.raises(ValueError):
        WindowSpec().operator(MID)


def test_fast_stft_matches_naive_double_sum(rng):
    f = Symbol(TINY, rng.normal(size=TINY.shape) + 1j * rng.normal(size=TINY.shape))
    g = make_symbol("gaussian", TINY, width=1.0)
    assert np.abs(full_stft(f, g) - stft_function_naive(f, g)).max() < 1e-12


def test_naive_size_limit():
    with pytest.raises(ValueError):
        stft_function_naive(make_symbol("gaussian", MID), WindowSpec())


@settings(max_examples=10, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 3))
def test_shift_and_modulation_covariance(a, b, seed):
    f = random_band_limited_symbol(MID, np.random.default_rng(seed))
    V = np.abs(full_stft(f))
    shifted = np.abs(full_stft(Symbol(MID, roll_symbol(f.values, (a, b)))))
    assert np.abs(shifted - np.roll(V, (a, b), axis=(0, 1))).max() < 1e-12
    mod = np.abs(full_stft(modulate_function(f, MID.node((a, b)))))
    assert np.abs(mod - np.roll(V, (a, b), axis=(2, 3))).max() < 1e-10


def test_energy_identity(rng):
    f = random_band_limited_symbol(MID, rng)
    g = make_symbol("gaussian", MID, width=1.3)
    V = full_stft(f, g)
    lhs = np.sum(np.abs(V) ** 2)
    rhs = np.sum(np.abs(f.values) ** 2) * np.sum(np.abs(g.values) ** 2)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_operator_stft_agrees_with_hilbert_schmidt_pairing(grid, rng):
    g = grid
    A = localized_random_operator(g, rng)
    B = WindowSpec("gaussian_projector").operator(g)
    full = stft_operator(A, B, keep_full=True).full
    c = g.n // 2
    for _ in range(5):
        kz = rng.integers(-3, 4, size=2)
        kw = 2 * rng.integers(-2, 3, size=2)
        lit = stft_operator_pointwise(A, B, g.node(kz), g.node(kw))
        assert abs(full[tuple(kz + c) + tuple(kw + c)] - lit) < 1e-9


def test_mixed_norm_array_and_result_agree(rng):
    f = random_band_limited_symbol(MID, rng)
    res = stft_function(f, WindowSpec(), keep_full=True)
    assert mixed_norm_inf1(res.full, MID) == pytest.approx(mixed_norm_inf1(res), rel=1e-13)
    with pytest.raises(ValueError):
        mixed_norm_inf1(res.full)


def test_mixed_norm_dominates_sup_norm():
    for fam in ("gaussian", "cos_sin_bump", "bump"):
        f = make_symbol(fam, MID)
        assert f.max_abs() <= 2 * np.pi * m_inf1_norm(f) + 1e-12


def test_window_equivalence(rng):
    for _ in range(3):
        f = random_band_limited_symbol(MID, rng)
        r = m_inf1_norm(f, WindowSpec(width=2.0)) / m_inf1_norm(f)
        assert 1 / 20 < r < 20


def test_strided_sup_with_refinement(rng):
    f = random_band_limited_symbol(MID, rng)
    full = stft_function(f, WindowSpec())
    coarse = stft_function(f, WindowSpec(), z_stride=2, refine=False)
    refined = stft_function(f, WindowSpec(), z_stride=2)
    assert np.all(coarse.sup_over_z <= full.sup_over_z + 1e-15)
    assert np.abs(refined.sup_over_z - full.sup_over_z).max() < 1e-12
    assert refined.z_evaluated < full.z_evaluated
    with pytest.raises(ValueError):
        stft_function(f, WindowSpec(), z_stride=2, keep_full=True)


def test_embedding_constants_are_finite_and_positive():
    c = embedding_constants(PhaseGrid(1, 16, 8.0))
    assert set(c) == {"linf_le_minf1", "minf1_le_cb", "op_le_minf1", "minf1_le_ck"}
    assert all(0 < v < np.inf for v in c.values())


def test_decay_integral_is_finite_and_grows_slowly():
    a = decay_integral(PhaseGrid(1, 32, 16.0), 3)
    b = decay_integral(PhaseGrid(1, 64, 32.0), 3)
    assert 0 < a < b < 2 * a
