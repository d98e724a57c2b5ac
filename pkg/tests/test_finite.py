import numpy as np
import pytest

from qha.finite import (FiniteGroup, HomZN, all_weyl, change_of_quantization, exhaustive_verify,
                        fw_finite, fw_inverse_finite, multiplier, op_phi_finite, sigma_finite,
                        symbol_phi_finite, weyl_finite)


@pytest.mark.parametrize("N", [3, 5, 7])
def test_exhaustive_verification_passes(N):
    rep = exhaustive_verify(N, samples=10 if N == 7 else 50)
    assert rep.passed, [(e.name, e.value) for e in rep.failures()]


@pytest.mark.parametrize("N", [2, 4, 1, 15])
def test_unsupported_moduli(N):
    with pytest.raises(ValueError):
        exhaustive_verify(N)


def test_group_validation():
    with pytest.raises(ValueError):
        FiniteGroup(4)
    with pytest.raises(ValueError):
        HomZN(5, 5)
    assert FiniteGroup(7).half == 4
    assert HomZN(2, 5).complement() == HomZN(4, 5)


def test_weyl_at_origin_is_identity():
    for c in range(5):
        assert np.array_equal(weyl_finite(0, 0, HomZN(c, 5)), np.eye(5))


def test_weyl_operators_are_unitary_and_multiply():
    N = 5
    for c in range(N):
        phi = HomZN(c, N)
        for z in [(1, 2), (3, 4), (0, 1)]:
            W = weyl_finite(*z, phi)
            assert np.abs(W @ W.conj().T - np.eye(N)).max() < 1e-13
            for w in [(2, 2), (4, 1)]:
                prod = W @ weyl_finite(*w, phi)
                zw = ((z[0] + w[0]) % N, (z[1] + w[1]) % N)
                assert np.abs(prod - multiplier(z, w, phi) * weyl_finite(*zw, phi)).max() < 1e-13


def test_sigma_is_ratio_of_multipliers():
    N = 7
    phi = HomZN(3, N)
    for z in [(1, 2), (5, 6)]:
        for w in [(2, 3), (4, 0)]:
            ratio = multiplier(z, w, phi) / multiplier(w, z, phi)
            assert abs(ratio - sigma_finite(z, w, N)) < 1e-13


def test_fourier_weyl_of_identity_is_point_mass():
    N = 5
    for c in range(N):
        F = fw_finite(np.eye(N), HomZN(c, N))
        expected = np.zeros((N, N))
        expected[0, 0] = N
        assert np.abs(F - expected).max() < 1e-13


def test_quantization_round_trip(rng):
    N = 5
    for c in range(N):
        phi = HomZN(c, N)
        W = all_weyl(phi)
        f = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
        assert np.abs(symbol_phi_finite(op_phi_finite(f, phi, W), phi, W) - f).max() < 1e-12
        A = rng.normal(size=(N, N))
        assert np.abs(fw_inverse_finite(fw_finite(A, phi, W), phi, W) - A).max() < 1e-12


def test_change_of_quantization_between_weyl_and_kohn_nirenberg(rng):
    N = 5
    weyl, kn = HomZN(FiniteGroup(N).half, N), HomZN(0, N)
    f = rng.normal(size=(N, N))
    g = change_of_quantization(f, weyl, kn)
    assert np.abs(op_phi_finite(g, kn) - op_phi_finite(f, weyl)).max() < 1e-12
    assert np.abs(change_of_quantization(g, kn, weyl) - f).max() < 1e-12
