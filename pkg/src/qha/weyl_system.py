"""Projective Weyl representation on the discretized Hilbert space.

The Hilbert space is sampled on the position nodes of a :class:`PhaseGrid`
(``n^d`` points, period ``L`` per axis).  Operators are stored as scaled
kernels ``M = h^d * k(t_i, t_j)``, so matrix product, matrix trace and the
Frobenius norm are the operator product, trace and Hilbert-Schmidt norm.

``W^tau_(x, xi) = exp(-i tau x.xi) M_xi T_x`` with ``M_xi`` the diagonal
modulation ``exp(i xi.t)`` and ``T_x`` the band-limited periodic translation.
On grid nodes ``T_x`` is a cyclic permutation and every algebraic identity of
the Weyl system holds to rounding.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .phase_space import (PhaseGrid, PhasePoint, _check_dim, _header,
                          _parse_header, fft_frequencies, shift_array)

HALF = 0.5
LATTICE_ATOL = 1e-12


@dataclass(frozen=True)
class OperatorRep:
    grid: PhaseGrid
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        dim = self.grid.dim
        if m.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        m = m.copy() if m is self.matrix else m
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, grid: PhaseGrid) -> "OperatorRep":
        return cls(grid, np.eye(grid.dim))

    @classmethod
    def zero(cls, grid: PhaseGrid) -> "OperatorRep":
        return cls(grid, np.zeros((grid.dim, grid.dim)))

    @classmethod
    def rank_one(cls, grid: PhaseGrid, u, v=None) -> "OperatorRep":
        """``|u><v|`` for sampled functions ``u, v`` (L^2 scaling ``h^d``)."""
        u = np.asarray(u, dtype=complex).ravel()
        v = u if v is None else np.asarray(v, dtype=complex).ravel()
        w = grid.h ** grid.d
        return cls(grid, w * np.outer(u, np.conj(v)))

    def _check(self, other: "OperatorRep"):
        if other.grid != self.grid:
            raise ValueError("operators live on different grids")

    def __matmul__(self, other: "OperatorRep") -> "OperatorRep":
        self._check(other)
        return OperatorRep(self.grid, self.matrix @ other.matrix)

    def __add__(self, other):
        if isinstance(other, OperatorRep):
            self._check(other)
            return OperatorRep(self.grid, self.matrix + other.matrix)
        return OperatorRep(self.grid, self.matrix + other * np.eye(self.grid.dim))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, OperatorRep):
            self._check(other)
            return OperatorRep(self.grid, self.matrix - other.matrix)
        return OperatorRep(self.grid, self.matrix - other * np.eye(self.grid.dim))

    def __mul__(self, c) -> "OperatorRep":
        return OperatorRep(self.grid, c * self.matrix)

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorRep":
        return OperatorRep(self.grid, -self.matrix)

    @property
    def H(self) -> "OperatorRep":
        return OperatorRep(self.grid, self.matrix.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def inverse(self) -> "OperatorRep":
        return OperatorRep(self.grid, np.linalg.inv(self.matrix))

    def kernel(self) -> np.ndarray:
        """Integral kernel samples ``k(t_i, t_j)``."""
        return self.matrix / self.grid.h ** self.grid.d


def _lattice_index(value: float, spacing: float):
    """Integer ``k`` with ``value = k * spacing`` or ``None``."""
    q = value / spacing
    k = round(q)
    if abs(q - k) <= LATTICE_ATOL * max(1.0, abs(q)):
        return int(k)
    return None


def lattice_offsets(grid: PhaseGrid, z: PhasePoint):
    """Integer node offsets of ``z`` (length 2d) or ``None`` if off-lattice."""
    out = []
    for v in z.x:
        k = _lattice_index(v, grid.h)
        if k is None:
            return None
        out.append(k)
    for v in z.xi:
        k = _lattice_index(v, grid.dxi)
        if k is None:
            return None
        out.append(k)
    return out


def _translation_1d(n: int, L: float, x: float) -> np.ndarray:
    k = _lattice_index(x, L / n)
    if k is not None:
        return np.roll(np.eye(n), k, axis=0)
    return shift_array(np.eye(n), [x], [L], axes=(0,))


def translation_matrix(grid: PhaseGrid, x) -> np.ndarray:
    """``T_x f(t) = f(t - x)`` as an ``n^d x n^d`` matrix."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.ones((1, 1))
    for xk in x:
        out = np.kron(out, _translation_1d(grid.n, grid.L, float(xk)))
    return out


def modulation_diagonal(grid: PhaseGrid, xi) -> np.ndarray:
    """Diagonal of ``M_xi f(t) = exp(i xi.t) f(t)``."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    return np.exp(1j * (grid.positions() @ xi))


def weyl_matrix(grid: PhaseGrid, z: PhasePoint, tau: float = HALF) -> np.ndarray:
    _check_dim(grid, z)
    if not np.isfinite(tau):
        raise ValueError("tau must be finite")
    phase = np.exp(-1j * tau * float(z.x @ z.xi))
    return phase * modulation_diagonal(grid, z.xi)[:, None] * translation_matrix(grid, z.x)


def weyl_operator(z: PhasePoint, tau: float = HALF, grid: PhaseGrid | None = None) -> OperatorRep:
    """``W^tau_z``; ``tau = 1/2`` is the symmetric Weyl operator."""
    if grid is None:
        grid = PhaseGrid(d=z.d)
    return OperatorRep(grid, weyl_matrix(grid, z, tau))


def weyl_multiplier(z: PhasePoint, w: PhasePoint, tau: float = HALF) -> complex:
    """``m_tau(z, w)`` with ``W_z W_w = m_tau(z, w) W_(z+w)``."""
    return complex(np.exp(-1j * ((1 - tau) * float(z.x @ w.xi) - tau * float(w.x @ z.xi))))


# ---------------------------------------------------------------------------
# shifts, modulations, parity

def _shift_lattice(A: np.ndarray, grid: PhaseGrid, offsets) -> np.ndarray:
    n, d = grid.n, grid.d
    T = A.reshape((n,) * (2 * d))
    k = offsets[:d]
    T = np.roll(T, tuple(k) * 2, axis=tuple(range(2 * d)))
    out = T.reshape(A.shape)
    xi = np.asarray(offsets[d:], dtype=float) * grid.dxi
    if np.any(xi != 0):
        m = modulation_diagonal(grid, xi)
        out = m[:, None] * out * np.conj(m)[None, :]
    return out


def op_shift(A: OperatorRep, z: PhasePoint, tau: float = HALF) -> OperatorRep:
    """``alpha_z(A) = W_z A W_z^*`` (phase convention ``tau`` cancels)."""
    _check_dim(A.grid, z)
    offs = lattice_offsets(A.grid, z)
    if offs is not None and tau == HALF:
        return OperatorRep(A.grid, _shift_lattice(A.matrix, A.grid, offs))
    W = weyl_matrix(A.grid, z, tau)
    return OperatorRep(A.grid, W @ A.matrix @ W.conj().T)


def op_modulate(A: OperatorRep, z: PhasePoint) -> OperatorRep:
    """``gamma_z(A) = W_(z/2) A W_(z/2)``."""
    _check_dim(A.grid, z)
    W = weyl_matrix(A.grid, z * 0.5, HALF)
    return OperatorRep(A.grid, W @ A.matrix @ W)


@lru_cache(maxsize=32)
def _parity_index(n: int, d: int) -> np.ndarray:
    c = n // 2
    idx1 = (2 * c - np.arange(n)) % n
    grids = np.meshgrid(*([idx1] * d), indexing="ij")
    return np.ravel_multi_index(tuple(g.ravel() for g in grids), (n,) * d)


def parity_index(grid: PhaseGrid) -> np.ndarray:
    """Permutation realizing ``t -> -t`` on the position nodes."""
    return _parity_index(grid.n, grid.d)


def parity_conjugate(A: OperatorRep) -> OperatorRep:
    """``beta_-(A) = U A U`` with ``U f(t) = f(-t)``."""
    p = parity_index(A.grid)
    return OperatorRep(A.grid, A.matrix[np.ix_(p, p)])


# ---------------------------------------------------------------------------
# generators of the phase-space action

def position_generator(grid: PhaseGrid, axis: int) -> np.ndarray:
    """Momentum operator ``P_axis`` (generator of translations, ``T_x = exp(-i x P)``)."""
    n = grid.n
    omega = fft_frequencies(n, grid.L)
    F = np.fft.fft(np.eye(n), axis=0)
    P1 = np.fft.ifft(omega[:, None] * F, axis=0)
    return _embed_axis(P1, grid, axis)


def momentum_generator(grid: PhaseGrid, axis: int) -> np.ndarray:
    """Position operator ``Q_axis = diag(t_axis)`` (generator of modulations)."""
    return np.diag(grid.positions()[:, axis]).astype(complex)


def _embed_axis(M1: np.ndarray, grid: PhaseGrid, axis: int) -> np.ndarray:
    out = np.ones((1, 1))
    for k in range(grid.d):
        out = np.kron(out, M1 if k == axis else np.eye(grid.n))
    return out


def generator(grid: PhaseGrid, direction: int) -> np.ndarray:
    """``G_j`` with ``d/dt alpha_(t e_j)(A) = i [G_j, A]`` at ``t = 0``.

    Directions ``0..d-1`` are positions (``G = -P``), ``d..2d-1`` momenta (``G = Q``).
    """
    d = grid.d
    if not 0 <= direction < 2 * d:
        raise ValueError(f"direction must lie in [0, {2 * d}), got {direction}")
    if direction < d:
        return -position_generator(grid, direction)
    return momentum_generator(grid, direction - d)


# ---------------------------------------------------------------------------
# CSV import / export

def write_operator_csv(A: OperatorRep, path) -> Path:
    path = Path(path)
    buf = io.StringIO()
    buf.write(_header("operator", A.grid) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    m = A.matrix
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            w.writerow([i, j, repr(float(m[i, j].real)), repr(float(m[i, j].imag))])
    path.write_text(buf.getvalue())
    return path


def read_operator_csv(path) -> OperatorRep:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty operator file")
    grid = _parse_header(lines[0], "operator")
    m = np.full((grid.dim, grid.dim), np.nan, dtype=complex)
    for lineno, row in enumerate(csv.reader(lines[1:]), start=2):
        if len(row) != 4:
            raise ValueError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
        try:
            m[int(row[0]), int(row[1])] = complex(float(row[2]), float(row[3]))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}:{lineno}: bad row {row}") from exc
    if np.isnan(m.real).any():
        raise ValueError(f"{path}: missing operator entries")
    return OperatorRep(grid, m)
