"""Reusable test objects: Hermite functions, smooth random operators and
the symbol/operator families used by the verification suites."""

from __future__ import annotations

import itertools

import numpy as np
from scipy.special import eval_hermite, factorial

from .phase_space import PhaseGrid, PhasePoint, Symbol, make_symbol
from .weyl_system import OperatorRep


def hermite_function(t: np.ndarray, k: int, width: float = 1.0) -> np.ndarray:
    """L^2-normalized Hermite function of order ``k`` and scale ``width``."""
    s = np.asarray(t, dtype=float) / width
    norm = 1.0 / np.sqrt(2.0 ** k * factorial(k) * np.sqrt(np.pi) * width)
    return norm * eval_hermite(k, s) * np.exp(-s ** 2 / 2)


def hermite_basis(grid: PhaseGrid, count: int, width: float = 1.0) -> np.ndarray:
    """First ``count`` tensor Hermite functions sampled on the nodes, columns ``(n^d, count)``."""
    t = grid.positions()
    orders = sorted(itertools.product(range(count), repeat=grid.d), key=lambda o: (sum(o), o))[:count]
    cols = [np.prod([hermite_function(t[:, k], o[k], width) for k in range(grid.d)], axis=0)
            for o in orders]
    return np.stack(cols, axis=-1)


def ground_state(grid: PhaseGrid, center: PhasePoint | None = None) -> np.ndarray:
    """Gaussian ground state ``pi^{-d/4} exp(-|t|^2 / 2)``, optionally phase-space shifted."""
    t = grid.positions()
    if center is None:
        return np.pi ** (-grid.d / 4) * np.exp(-np.sum(t ** 2, axis=1) / 2)
    return (np.pi ** (-grid.d / 4) * np.exp(-np.sum((t - center.x) ** 2, axis=1) / 2)
            * np.exp(1j * t @ center.xi))


def ground_state_projector(grid: PhaseGrid) -> OperatorRep:
    return OperatorRep.rank_one(grid, ground_state(grid))


def smooth_random_operator(grid: PhaseGrid, rng, rank: int = 8, width: float = 1.0,
                           hermitian: bool = False) -> OperatorRep:
    """``V C V^*`` with ``V`` the first Hermite functions; localized in phase space."""
    V = hermite_basis(grid, rank, width) * np.sqrt(grid.h ** grid.d)
    C = rng.normal(size=(rank, rank)) + 1j * rng.normal(size=(rank, rank))
    if hermitian:
        C = (C + C.conj().T) / 2
    return OperatorRep(grid, V @ C @ V.conj().T)


def coherent_state(grid: PhaseGrid, center: PhasePoint, width: float = 0.8) -> np.ndarray:
    """Squeezed Gaussian ``exp(-|t - x|^2 / (2 width^2) + i t.xi)``, L^2-normalized on the grid."""
    t = grid.positions()
    v = np.exp(-np.sum((t - center.x) ** 2, axis=1) / (2 * width ** 2) + 1j * t @ center.xi)
    return v / np.sqrt(np.sum(np.abs(v) ** 2) * grid.h ** grid.d)


def localized_random_operator(grid: PhaseGrid, rng, rank: int = 4, width: float = 0.8,
                              spread: float = 0.5, hermitian: bool = False) -> OperatorRep:
    """Random combination of rank-one coherent-state operators near the origin.

    Width 0.8 balances decay in position and momentum, so the Fourier-Weyl
    image is negligible on the boundary of the periodic phase-space grid.
    """
    d = grid.d
    vecs = [coherent_state(grid, PhasePoint.from_vector(rng.uniform(-spread, spread, 2 * d)), width)
            for _ in range(2 * rank)]
    coef = rng.normal(size=rank) + 1j * rng.normal(size=rank)
    M = np.zeros((grid.dim, grid.dim), dtype=complex)
    for k in range(rank):
        u, v = vecs[2 * k], (vecs[2 * k] if hermitian else vecs[2 * k + 1])
        c = coef[k].real if hermitian else coef[k]
        M += c * np.outer(u, v.conj())
    return OperatorRep(grid, M * grid.h ** grid.d)


def random_band_limited_symbol(grid: PhaseGrid, rng, terms: int = 6) -> Symbol:
    """Sum of random Gaussians with random centers and widths, complex amplitudes."""
    vals = np.zeros(grid.shape, dtype=complex)
    for _ in range(terms):
        c = rng.uniform(-1.5, 1.5, size=2 * grid.d)
        w = rng.uniform(0.8, 1.5)
        a = rng.normal() + 1j * rng.normal()
        vals += make_symbol("gaussian", grid, center=c, width=w, amplitude=a).values
    return Symbol(grid, vals)


def symbol_family(grid: PhaseGrid) -> list:
    """Ten smooth, well-resolved test symbols ``(name, Symbol)``."""
    d = grid.d
    z = np.zeros(2 * d)
    e = np.zeros(2 * d)
    e[0] = 1.0
    specs = [
        ("gaussian_w1", "gaussian", dict(width=1.0)),
        ("gaussian_w1.5", "gaussian", dict(width=1.5)),
        ("gaussian_w0.8", "gaussian", dict(width=0.8)),
        ("gaussian_shift", "gaussian", dict(center=e, width=1.0)),
        ("gaussian_shift_neg", "gaussian", dict(center=-0.5 * np.ones(2 * d), width=1.2)),
        ("bump_r4", "bump", dict(radius=4.0)),
        ("bump_r5", "bump", dict(radius=5.0, center=0.5 * e)),
        ("cos_sin_bump", "cos_sin_bump", dict(radius=5.0)),
        ("gaussian_complex", "gaussian", dict(width=1.0, amplitude=1j, center=z)),
    ]
    out = [(name, make_symbol(fam, grid, **p)) for name, fam, p in specs]
    g1 = make_symbol("gaussian", grid, width=1.0).values
    pw = make_symbol("plane_wave", grid, point=np.r_[np.full(d, 0.5), np.full(d, 0.5)]).values
    out.append(("modulated_gaussian", Symbol(grid, g1 * pw)))
    return out
