"""Short-time Fourier transforms of symbols and operators and the
``L^{inf,1}`` / ``M^{inf,1}`` norms built from them.

Pairings use the normalized measure ``dz / (2 pi)^d`` on the function side
and the Hilbert-Schmidt pairing on the operator side; with these the two
STFTs agree exactly through ``A -> F_sigma F_W A``.  The outer ``dw``
integral of the mixed norm uses the Lebesgue cell.  The frequency variable
follows the convention ``gamma_w(g)(u) = exp(i sigma(w, u)) g(u)``, which
differs from the common textbook STFT by a factor ``2 pi`` in ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .families import ground_state
from .fourier import fourier_sigma_array
from .phase_space import PhaseGrid, PhasePoint, Symbol, make_symbol, roll_symbol
from .quantize import symbol_of
from .weyl_system import OperatorRep, op_modulate, op_shift


@dataclass(frozen=True)
class WindowSpec:
    """``gaussian_symbol`` windows symbols, ``gaussian_projector`` windows operators."""

    kind: str = "gaussian_symbol"
    width: float = 1.0
    center: tuple = ()

    def __post_init__(self):
        if self.kind not in ("gaussian_symbol", "gaussian_projector"):
            raise ValueError(f"unknown window kind {self.kind!r}")
        if not self.width > 0:
            raise ValueError("window width must be positive")

    def symbol(self, grid: PhaseGrid) -> Symbol:
        if self.kind != "gaussian_symbol":
            return symbol_of(self.operator(grid))
        c = np.asarray(self.center, dtype=float) if len(self.center) else np.zeros(2 * grid.d)
        return make_symbol("gaussian", grid, center=c, width=self.width)

    def operator(self, grid: PhaseGrid) -> OperatorRep:
        if self.kind != "gaussian_projector":
            raise ValueError("operator window requires kind 'gaussian_projector'")
        t = grid.positions()
        c = (PhasePoint.from_vector(self.center) if len(self.center)
             else PhasePoint.zero(grid.d))
        s = self.width
        v = (np.pi * s ** 2) ** (-grid.d / 4) * np.exp(-np.sum((t - c.x) ** 2, axis=1) / (2 * s ** 2))
        v = v * np.exp(1j * t @ c.xi)
        return OperatorRep.rank_one(grid, v)


@dataclass
class STFTResult:
    """Samples of an STFT: per-``w`` sup over the evaluated ``z`` and, optionally, all values."""

    grid: PhaseGrid
    sup_over_z: np.ndarray
    full: np.ndarray | None = field(default=None, repr=False)
    z_evaluated: int = 0


def _window_values(grid: PhaseGrid, g) -> np.ndarray:
    if isinstance(g, WindowSpec):
        g = g.symbol(grid)
    vals = g.values if isinstance(g, Symbol) else np.asarray(g)
    if not np.any(vals != 0):
        raise ValueError("window must be nonzero")
    return vals


def _z_offsets(grid: PhaseGrid, stride: int):
    c = grid.n // 2
    ax = np.arange(0, grid.n, stride) - c
    return [tuple(z) for z in np.stack(np.meshgrid(*([ax] * (2 * grid.d)), indexing="ij"), -1)
            .reshape(-1, 2 * grid.d)]


def _slice(fv: np.ndarray, gv: np.ndarray, offset, d: int) -> np.ndarray:
    return fourier_sigma_array(fv * np.conj(roll_symbol(gv, offset)), d)


def stft_function(f: Symbol, g, z_stride: int = 1, refine: bool = True,
                  keep_full: bool = False, pmap=map) -> STFTResult:
    """``V_g f(z, w) = <f, gamma_w alpha_z g>`` for lattice ``z`` and every node ``w``.

    With ``z_stride > 1`` the sup over ``z`` is taken on a subgrid, followed by
    one pass over the lattice neighbours of every per-``w`` maximizer.
    """
    grid = f.grid
    gv = _window_values(grid, g)
    fv = f.values
    d = grid.d
    offsets = _z_offsets(grid, z_stride)
    if keep_full and z_stride != 1:
        raise ValueError("keep_full requires z_stride = 1")
    full = np.empty(grid.shape * 2, dtype=complex) if keep_full else None
    sup = np.zeros(grid.shape)
    arg = np.zeros(grid.shape + (2 * d,), dtype=int)
    for off, V in zip(offsets, pmap(lambda o: _slice(fv, gv, o, d), offsets)):
        a = np.abs(V)
        better = a > sup
        sup = np.where(better, a, sup)
        arg[better] = off
        if keep_full:
            full[tuple(np.asarray(off) + grid.n // 2)] = V
    count = len(offsets)
    if z_stride > 1 and refine:
        seen = set(offsets)
        cand = set()
        steps = np.stack(np.meshgrid(*([np.arange(-z_stride + 1, z_stride)] * (2 * d)),
                                     indexing="ij"), -1).reshape(-1, 2 * d)
        for base in {tuple(x) for x in arg.reshape(-1, 2 * d)}:
            for s in steps:
                z = tuple(int((b + k + grid.n // 2) % grid.n - grid.n // 2) for b, k in zip(base, s))
                if z not in seen:
                    cand.add(z)
        cand = sorted(cand)
        for V in pmap(lambda o: _slice(fv, gv, o, d), cand):
            sup = np.maximum(sup, np.abs(V))
        count += len(cand)
    return STFTResult(grid, sup, full, count)


def stft_function_naive(f: Symbol, g) -> np.ndarray:
    """Direct double sum over ``(z, w, u)``; small grids only."""
    grid = f.grid
    if grid.n ** (2 * grid.d) > 256:
        raise ValueError("naive STFT limited to n^{2d} <= 256")
    gv = _window_values(grid, g)
    d = grid.d
    U = np.stack([m.ravel() for m in grid.mesh()], -1)
    idx = np.stack(np.meshgrid(*([np.arange(grid.n)] * (2 * d)), indexing="ij"), -1).reshape(-1, 2 * d)
    c = grid.n // 2
    out = np.empty((U.shape[0], U.shape[0]), dtype=complex)
    for zi, zidx in enumerate(idx):
        shifted = np.array([gv[tuple((uidx - (zidx - c)) % grid.n)] for uidx in idx])
        for wi, w in enumerate(U):
            sig = U[:, :d] @ w[d:] - w[:d] @ U[:, d:].T  # sigma(w, u) = u_x.eta - y.u_xi
            out[zi, wi] = np.sum(f.values.ravel() * np.conj(np.exp(1j * sig) * shifted)) * grid.mu_cell
    return out.reshape(grid.shape * 2)


def stft_operator(A: OperatorRep, B=None, z_stride: int = 1, refine: bool = True,
                  keep_full: bool = False, pmap=map) -> STFTResult:
    """``V_B A(z, w) = <A, gamma_w alpha_z B>`` through ``A -> F_sigma F_W A``."""
    if B is None:
        B = WindowSpec("gaussian_projector")
    Bop = B.operator(A.grid) if isinstance(B, WindowSpec) else B
    if not np.any(Bop.matrix != 0):
        raise ValueError("window operator must be nonzero")
    return stft_function(symbol_of(A), symbol_of(Bop), z_stride, refine, keep_full, pmap)


def stft_operator_pointwise(A: OperatorRep, B: OperatorRep, z: PhasePoint, w: PhasePoint) -> complex:
    """Literal Hilbert-Schmidt pairing ``tr(A (gamma_w alpha_z B)^*)``."""
    X = op_modulate(op_shift(B, z), w)
    return complex(np.sum(A.matrix * np.conj(X.matrix)))


def mixed_norm_inf1(F, grid: PhaseGrid | None = None) -> float:
    """``int sup_z |F(z, w)| dw``; ``F`` is an :class:`STFTResult` or a full ``(z, w)`` array."""
    if isinstance(F, STFTResult):
        return float(np.sum(F.sup_over_z) * F.grid.cell)
    if grid is None:
        raise ValueError("grid required for raw arrays")
    a = np.abs(np.asarray(F)).reshape(grid.n ** (2 * grid.d), -1)
    return float(np.sum(a.max(axis=0)) * grid.cell)


def m_inf1_norm(obj, window=None, **kwargs) -> float:
    if isinstance(obj, OperatorRep):
        return mixed_norm_inf1(stft_operator(obj, window, **kwargs))
    if isinstance(obj, Symbol):
        return mixed_norm_inf1(stft_function(obj, window or WindowSpec(), **kwargs))
    raise TypeError(f"unsupported object {type(obj).__name__}")


def decay_integral(grid: PhaseGrid, order: int) -> float:
    """Grid quadrature of ``int min_{|a| <= order} |w^a|^-1 dw`` (integrand capped at 1)."""
    from .calculus import multi_indices
    coords = [m.ravel() for m in grid.mesh()]
    best = np.ones_like(coords[0])
    for a in multi_indices(2 * grid.d, order):
        mono = np.abs(a.monomial(coords))
        with np.errstate(divide="ignore"):
            best = np.minimum(best, np.where(mono > 0, 1.0 / mono, np.inf))
    return float(np.sum(best) * grid.cell)


__all__ = ["WindowSpec", "STFTResult", "stft_function", "stft_function_naive",
           "stft_operator", "stft_operator_pointwise", "mixed_norm_inf1", "m_inf1_norm",
           "decay_integral", "ground_state"]
