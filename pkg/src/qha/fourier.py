"""Symplectic Fourier transform of symbols and Fourier-Weyl transform of
operators on the phase lattice.

Both transforms use the normalized phase-space measure ``dz / (2 pi)^d``;
on the grid one cell of that measure weighs ``n^-d``.  With this choice
``F_sigma`` is exactly self-inverse, ``F_W`` is unitary from Hilbert-Schmidt
operators onto grid L^2, and ``F_W^-1(F_sigma 1) = I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .phase_space import PhaseGrid, Symbol, TWO_PI, lp_norm
from .weyl_system import HALF, OperatorRep, weyl_matrix

# ---------------------------------------------------------------------------
# centered DFTs


def cdft(x: np.ndarray, axes, sign: int = -1) -> np.ndarray:
    """``sum_l x_l exp(sign 2 pi i (m - c)(l - c) / n)`` over ``axes`` (``c = n//2``)."""
    axes = tuple(axes)
    y = np.fft.ifftshift(x, axes=axes)
    if sign < 0:
        y = np.fft.fftn(y, axes=axes)
    else:
        y = np.fft.ifftn(y, axes=axes)
        y = y * np.prod([x.shape[a] for a in axes])
    return np.fft.fftshift(y, axes=axes)


@dataclass(frozen=True)
class NormalizationProfile:
    """Prefactors of the two transforms for spatial dimension ``d``."""

    d: int = 1

    @property
    def fsigma_prefactor(self) -> float:
        return TWO_PI ** (-self.d)

    @property
    def fw_measure_prefactor(self) -> float:
        """``c_W``: weight of ``dw`` in ``F_W^-1`` and in the L^2 pairing."""
        return TWO_PI ** (-self.d)

    def weight(self, grid: PhaseGrid) -> float:
        """Per-node weight ``c_W * cell``."""
        return self.fw_measure_prefactor * grid.cell


def calibrate_fw_constant(A: OperatorRep) -> float:
    """``c`` with ``c * cell * sum |F_W A|^2 = ||A||_2^2`` for one operator."""
    F = fourier_weyl(A).values
    return float(np.sum(np.abs(A.matrix) ** 2) / (np.sum(np.abs(F) ** 2) * A.grid.cell))


# ---------------------------------------------------------------------------
# symplectic Fourier transform


def fourier_sigma_array(values: np.ndarray, d: int) -> np.ndarray:
    n = values.shape[0]
    xs, xis = tuple(range(d)), tuple(range(d, 2 * d))
    # over x: sign -, output eta; over xi: sign +, output y
    g = cdft(values, xs, sign=-1)
    g = cdft(g, xis, sign=+1)
    g = np.moveaxis(g, xs + xis, xis + xs)
    return g * float(n) ** (-d)


def fourier_sigma(f: Symbol) -> Symbol:
    """``F_sigma f(w) = (2 pi)^-d int f(z) exp(i sigma(z, w)) dz`` on the grid."""
    return Symbol(f.grid, fourier_sigma_array(f.values, f.grid.d))


def fourier_sigma_naive(f: Symbol) -> Symbol:
    """Direct double sum; ``O(n^{4d})``, for small grids only."""
    g = f.grid
    if g.n ** (2 * g.d) > 4096:
        raise ValueError("naive transform limited to n^{2d} <= 4096")
    Z = np.stack([m.ravel() for m in g.mesh()], axis=-1)
    d = g.d
    sig = Z[:, None, d:] * Z[None, :, :d]  # y.xi with z=row, w=col
    sig = sig.sum(-1) - (Z[:, None, :d] * Z[None, :, d:]).sum(-1)
    out = (2 * np.pi) ** (-d) * g.cell * (f.values.ravel() @ np.exp(1j * sig))
    return Symbol(g, out.reshape(g.shape))


# ---------------------------------------------------------------------------
# Fourier-Weyl transform


@lru_cache(maxsize=16)
def _diag_index(n: int, d: int):
    """Flat indices ``(l, (l - j + c) mod n)`` of the rows/columns read by F_W."""
    c = n // 2
    j = np.arange(n)[:, None]
    l = np.arange(n)[None, :]
    sub = (l - j + c) % n  # (j, l)
    # multi-index: J = (j_1..j_d), Lx = (l_1..l_d)
    shape = (n,) * (2 * d)
    jl = np.indices(shape)
    js, ls = jl[:d], jl[d:]
    subs = [sub[js[k], ls[k]] for k in range(d)]
    row = np.ravel_multi_index(tuple(ls), (n,) * d).reshape(n ** d, n ** d)
    col = np.ravel_multi_index(tuple(subs), (n,) * d).reshape(n ** d, n ** d)
    row.flags.writeable = False
    col.flags.writeable = False
    return row, col


def _tau_phase(grid: PhaseGrid, tau: float) -> np.ndarray:
    mesh = grid.mesh()
    d = grid.d
    xxi = sum(mesh[k] * mesh[d + k] for k in range(d))
    return np.exp(1j * tau * xxi)


def fourier_weyl(A: OperatorRep, tau: float = HALF) -> Symbol:
    """``F_W^tau(A)(w) = tr(A (W^tau_w)^*)`` at every node ``w``."""
    g = A.grid
    n, d = g.n, g.d
    row, col = _diag_index(n, d)
    D = A.matrix[row, col].reshape(g.shape)
    F = cdft(D, range(d, 2 * d), sign=-1)
    return Symbol(g, _tau_phase(g, tau) * F)


def shift_fourier_weyl(F: Symbol, index, tau: float = HALF) -> Symbol:
    """``F(. - z)`` for the lattice point ``z`` at integer offsets ``index``.

    A Fourier-Weyl image is quasi-periodic on the grid, since
    ``W_(y + L, eta) = e^{-i tau L eta} W_(y, eta)`` and likewise in ``eta``, so
    values pulled across the boundary pick up the matching phase.
    """
    g = F.grid
    n, d = g.n, g.d
    index = np.asarray(index, dtype=int)
    c = n // 2
    out = F.values
    phase = np.ones(g.shape, dtype=complex)
    centered = [np.arange(n).reshape([-1 if a == ax else 1 for a in range(2 * d)]) - c
                for ax in range(2 * d)]
    for j in range(d):
        src_y = centered[j] - index[j]
        src_e = centered[d + j] - index[d + j]
        qy, ky = np.divmod(src_y + c, n)
        qe, ke = np.divmod(src_e + c, n)
        ky, ke = ky - c, ke - c
        phase = phase * np.exp(2j * np.pi * tau * (qe * (ky + qy * n) + qy * ke))
    out = np.roll(out, tuple(index), axis=tuple(range(2 * d)))
    return Symbol(g, out * phase)


def fourier_weyl_naive(A: OperatorRep, tau: float = HALF) -> Symbol:
    """Per-node trace against explicitly built Weyl matrices."""
    g = A.grid
    out = np.empty(g.shape, dtype=complex)
    for idx in np.ndindex(g.shape):
        W = weyl_matrix(g, g.node(np.array(idx) - g.n // 2), tau)
        out[idx] = np.sum(A.matrix * W.conj())  # tr(A W^*)
    return Symbol(g, out)


def fourier_weyl_inverse(f: Symbol, tau: float = HALF,
                         profile: NormalizationProfile | None = None) -> OperatorRep:
    """``c_W sum_w f(w) W^tau_w * cell``, assembled by one FFT and a scatter."""
    g = f.grid
    n, d = g.n, g.d
    profile = profile or NormalizationProfile(d)
    E = cdft(f.values * np.conj(_tau_phase(g, tau)), range(d, 2 * d), sign=+1)
    row, col = _diag_index(n, d)
    M = np.empty((g.dim, g.dim), dtype=complex)
    M[row, col] = E.reshape(g.dim, g.dim)
    return OperatorRep(g, profile.weight(g) * M)


def fourier_weyl_inverse_naive(f: Symbol, tau: float = HALF) -> OperatorRep:
    g = f.grid
    profile = NormalizationProfile(g.d)
    M = np.zeros((g.dim, g.dim), dtype=complex)
    for idx in np.ndindex(g.shape):
        if f.values[idx] != 0:
            M += f.values[idx] * weyl_matrix(g, g.node(np.array(idx) - g.n // 2), tau)
    return OperatorRep(g, profile.weight(g) * M)


def symbol_l2_norm(f: Symbol, profile: NormalizationProfile | None = None) -> float:
    """L^2 norm of a Fourier-Weyl image under the calibrated measure."""
    profile = profile or NormalizationProfile(f.grid.d)
    return float(np.sqrt(profile.weight(f.grid) * np.sum(np.abs(f.values) ** 2)))


def plancherel_defect(A: OperatorRep) -> float:
    hs = float(np.linalg.norm(A.matrix))
    if hs == 0.0:
        raise ValueError("plancherel defect undefined for the zero operator")
    return abs(symbol_l2_norm(fourier_weyl(A)) - hs) / hs


def lebesgue_l1(f: Symbol) -> float:
    return lp_norm(f.values, 1, f.grid.cell)
