"""Quantum harmonic analysis convolutions, the Bessel-potential kernel
``K = op_weyl((1 - Delta)^-d delta_0)`` and the Schatten-class
Calderon-Vaillancourt estimates in both directions.

Convolutions integrate against the normalized measure ``dz / (2 pi)^d``, so
``delta_0`` has ``F_sigma delta_0 = 1`` and the convolution theorems carry no
stray constants.  Symbol ``L^p`` norms use Lebesgue measure throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .calculus import MultiIndex, derivative_table, schatten_norm, sobolev_norm, symbol_derivative
from .fourier import fourier_sigma, fourier_sigma_array
from .phase_space import PhaseGrid, Symbol, TWO_PI, lp_norm
from .quantize import op_weyl, symbol_of
from .report import NormReport
from .weyl_system import OperatorRep, parity_conjugate

CV_SLACK = 1e-3


def _phase_matrix(grid: PhaseGrid) -> np.ndarray:
    """``U[m, i] = exp(i xi_m . t_i)`` over momentum nodes ``m`` and position nodes ``i``."""
    t = grid.positions()
    xi = grid.positions() * (grid.dxi / grid.h)
    return np.exp(1j * xi @ t.T)


def _x_offsets(grid: PhaseGrid):
    c = grid.n // 2
    return list(np.ndindex((grid.n,) * grid.d)), c


def _roll_x(M: np.ndarray, grid: PhaseGrid, k) -> np.ndarray:
    n, d = grid.n, grid.d
    T = M.reshape((n,) * (2 * d))
    T = np.roll(T, tuple(k) * 2, axis=tuple(range(2 * d)))
    return T.reshape(M.shape)


def conv_fn_op(f: Symbol, A: OperatorRep) -> OperatorRep:
    """``f * A = int f(z) alpha_z(A) dz / (2 pi)^d`` summed over lattice ``z``."""
    if f.grid != A.grid:
        raise ValueError("symbol and operator live on different grids")
    g = f.grid
    U = _phase_matrix(g)
    fv = f.values.reshape(g.dim, g.dim)  # rows: x multi-index, cols: xi multi-index
    out = np.zeros((g.dim, g.dim), dtype=complex)
    idx, c = _x_offsets(g)
    for flat, xi_idx in enumerate(idx):
        row = fv[flat]
        if not np.any(row):
            continue
        k = np.asarray(xi_idx) - c
        # G[i, j] = sum_m f(k, m) exp(i xi_m (t_i - t_j))
        G = U.T @ (row[:, None] * np.conj(U))
        out += _roll_x(A.matrix, g, k) * G
    return OperatorRep(g, out * g.mu_cell)


def conv_op_op(A: OperatorRep, B: OperatorRep) -> Symbol:
    """``A * B (z) = tr(A alpha_z(beta_-(B)))`` at every lattice ``z``."""
    if A.grid != B.grid:
        raise ValueError("operators live on different grids")
    g = A.grid
    C = parity_conjugate(B).matrix
    U = _phase_matrix(g)
    At = A.matrix.T
    out = np.empty((g.dim, g.dim), dtype=complex)
    idx, c = _x_offsets(g)
    for flat, xi_idx in enumerate(idx):
        k = np.asarray(xi_idx) - c
        S = At * _roll_x(C, g, k)  # tr(A X) = sum A[j, i] X[i, j]
        out[flat] = np.sum((U @ S) * np.conj(U), axis=1)
    return Symbol(g, out.reshape(g.shape))


def conv_fn_fn(f: Symbol, h: Symbol) -> Symbol:
    """Periodic convolution ``int f(z) h(. - z) dz / (2 pi)^d`` via the symplectic transform."""
    if f.grid != h.grid:
        raise ValueError("symbols live on different grids")
    d = f.grid.d
    prod = fourier_sigma_array(f.values, d) * fourier_sigma_array(h.values, d)
    return Symbol(f.grid, fourier_sigma_array(prod, d))


# ---------------------------------------------------------------------------
# Bessel potential and kernel K

def _one_plus_w2(grid: PhaseGrid) -> np.ndarray:
    return 1.0 + sum(m ** 2 for m in grid.mesh())


def bessel_delta(grid: PhaseGrid, power: int | None = None) -> Symbol:
    """``(1 - Delta)^-power delta_0`` through its transform ``(1 + |w|^2)^-power``."""
    power = grid.d if power is None else int(power)
    if power < 1:
        raise ValueError(f"power must be >= 1, got {power}")
    vals = fourier_sigma_array(_one_plus_w2(grid) ** (-power) + 0j, grid.d)
    return Symbol(grid, vals.real)


def apply_bessel_operator(f: Symbol, power: int | None = None) -> Symbol:
    """``(1 - Delta)^power f`` by a spectral multiplier."""
    g = f.grid
    power = g.d if power is None else int(power)
    return Symbol(g, fourier_sigma_array(_one_plus_w2(g) ** power * fourier_sigma_array(f.values, g.d), g.d))


def bessel_operator_on(A: OperatorRep, power: int | None = None, table=None) -> OperatorRep:
    """``(1 - Delta)^power A`` with ``Delta = sum_j d_j^2`` by commutator derivatives."""
    g = A.grid
    power = g.d if power is None else int(power)
    dim = 2 * g.d
    table = table or derivative_table(A, 2 * power)
    # (1 - Delta)^p = sum over (k_1..k_dim) multinomial * (-1)^|k| prod d_j^{2 k_j}
    out = np.zeros_like(A.matrix)
    from itertools import product
    for ks in product(range(power + 1), repeat=dim):
        s = sum(ks)
        if s > power:
            continue
        coef = comb(power, s) * _multinomial(ks) * (-1) ** s
        out = out + coef * table[MultiIndex(tuple(2 * k for k in ks))].matrix
    return OperatorRep(g, out)


def _multinomial(ks) -> int:
    from math import factorial
    r = factorial(sum(ks))
    for k in ks:
        r //= factorial(k)
    return r


@dataclass(frozen=True)
class CordesKernel:
    K: OperatorRep
    trace_norm: float
    bessel_symbol: Symbol

    @property
    def grid(self) -> PhaseGrid:
        return self.K.grid

    def constant(self, p: float) -> float:
        """``(2 pi)^{d/p} ||K||_{T^1}``."""
        return TWO_PI ** (self.grid.d / p) * self.trace_norm


def cordes_kernel(grid: PhaseGrid) -> CordesKernel:
    G = bessel_delta(grid)
    K = op_weyl(G)
    return CordesKernel(K, schatten_norm(K, 1), G)


def cv_bound(f: Symbol, p: float, K: CordesKernel) -> NormReport:
    """Check ``||op_weyl f||_{T^p} <= (2 pi)^{d/p} ||K||_{T^1} ||f||_{W^{2d,p}}``."""
    if not 1 <= p < np.inf:
        raise ValueError("p must lie in [1, inf)")
    k = 2 * f.grid.d
    lhs = schatten_norm(op_weyl(f), p)
    rhs = K.constant(p) * sobolev_norm(f, k, p)
    return _bound_report("cv", lhs, rhs, p,
                         "Calderon-Vaillancourt for Schatten classes: ||op^w(f)||_{T^p} <= c||f||_{W^{k,p}}")


def reverse_cv_bound(A: OperatorRep, p: float, K: CordesKernel, table=None) -> NormReport:
    """Check ``||sym(A)||_{L^p} <= (2 pi)^{d/p} ||K||_{T^1} ||A||_{W^{2d,p}}``."""
    if not 1 <= p < np.inf:
        raise ValueError("p must lie in [1, inf)")
    k = 2 * A.grid.d
    table = table or derivative_table(A, k)
    lhs = symbol_of(A).lp_norm(p)
    rhs = K.constant(p) * sobolev_norm(table, k, p)
    return _bound_report("reverse_cv", lhs, rhs, p,
                         "reverse estimate: ||sym^w(A)||_{L^p} <= c||A||_{W^{k,p}}")


def _bound_report(prefix: str, lhs: float, rhs: float, p: float, anchor: str) -> NormReport:
    rep = NormReport()
    rep.add(f"{prefix}_lhs_p{p:g}", lhs, None, anchor)
    rep.add(f"{prefix}_rhs_p{p:g}", rhs, None, anchor)
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else np.inf)
    rep.add(f"{prefix}_ratio_p{p:g}", ratio, 1.0 + CV_SLACK, anchor)
    return rep


def kernel_identity_defect(f: Symbol, K: CordesKernel) -> float:
    """``||op_weyl(f) - P(f) * K||_F`` with ``P = (1 - Delta)^d``."""
    lhs = op_weyl(f).matrix
    rhs = conv_fn_op(apply_bessel_operator(f), K.K).matrix
    return float(np.linalg.norm(lhs - rhs))


def reverse_identity_defect(A: OperatorRep, K: CordesKernel, table=None) -> float:
    """``max |sym(A) - P(A) * K|`` with ``P(A)`` from commutator derivatives."""
    PA = bessel_operator_on(A, table=table)
    return float(np.abs(symbol_of(A).values - conv_op_op(PA, K.K).values).max())


def symbol_lp_mu(f: Symbol, p: float) -> float:
    """``L^p`` norm for the normalized measure ``dz / (2 pi)^d``."""
    return lp_norm(f.values, p, f.grid.mu_cell)
