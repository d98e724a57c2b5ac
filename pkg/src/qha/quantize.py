"""Weyl and tau quantization, dequantization and the symbol change map.

All maps are compositions of the two grid transforms, so they are exact
linear bijections between symbols and operators on the same grid.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .fourier import _tau_phase, fourier_sigma, fourier_weyl, fourier_weyl_inverse
from .phase_space import PhaseGrid, Symbol, TWO_PI
from .weyl_system import HALF, OperatorRep


def op_tau(f: Symbol, tau: float) -> OperatorRep:
    """``(F_W^tau)^-1 F_sigma f``; ``tau = 0`` is Kohn-Nirenberg, ``1/2`` Weyl."""
    if not np.isfinite(tau):
        raise ValueError("tau must be finite")
    return fourier_weyl_inverse(fourier_sigma(f), tau)


def op_weyl(f: Symbol) -> OperatorRep:
    return op_tau(f, HALF)


def symbol_of(A: OperatorRep, tau: float = HALF) -> Symbol:
    """Inverse of :func:`op_tau` (``F_sigma`` is its own inverse)."""
    return fourier_sigma(fourier_weyl(A, tau))


def n_tau(f: Symbol, tau: float) -> Symbol:
    """Map a Kohn-Nirenberg symbol to the tau-symbol of the same operator.

    ``F_W^tau (F_W^0)^-1`` is multiplication by ``exp(i tau y.eta)``, so the
    change of symbol is one Fourier multiplier.
    """
    if tau == 0:
        return f
    g = fourier_sigma(f)
    return fourier_sigma(Symbol(f.grid, _tau_phase(f.grid, tau) * g.values))


def kernel_quadrature(func: Callable, grid: PhaseGrid, tau: float = HALF) -> OperatorRep:
    """Direct quadrature of the tau-quantization kernel.

    ``k(t, s) = (2 pi)^-d int func((1 - tau) t + tau s, xi) exp(i xi.(t - s)) dxi``
    with a Riemann sum over the momentum nodes.  ``func(x, xi)`` takes arrays
    of shape ``(..., d)`` and is evaluated off the grid when needed.  On the
    torus ``t - s`` is taken in ``[-L/2, L/2)`` so the evaluation point is
    ``t - tau (t - s)`` for the principal difference.
    """
    d = grid.d
    t = grid.positions()
    xi_axes = np.meshgrid(*([grid.xi] * d), indexing="ij")
    xi = np.stack([a.ravel() for a in xi_axes], axis=-1)
    diff = t[:, None, :] - t[None, :, :]
    diff = np.mod(diff + grid.L / 2, grid.L) - grid.L / 2
    mid = t[:, None, :] - tau * diff  # (i, j, d)
    K = np.zeros((grid.dim, grid.dim), dtype=complex)
    for m in range(xi.shape[0]):
        xm = np.broadcast_to(xi[m], mid.shape)
        K += func(mid, xm) * np.exp(1j * diff @ xi[m])
    K *= grid.dxi ** d / TWO_PI ** d
    return OperatorRep(grid, grid.h ** d * K)
