"""Discretized phase space: grids, points, the symplectic form and the
shift / modulation actions on sampled phase-space functions.

Layout conventions
------------------
A :class:`PhaseGrid` with parameters ``(d, n, L)`` samples ``R^{2d}`` as a
torus.  Position axes have spacing ``h = L / n`` and period ``L``; momentum
axes have spacing ``2*pi / L`` and period ``2*pi*n / L``.  Node ``k`` of an
axis sits at ``(k - n//2) * spacing`` so that the origin is a node.  Arrays
are kept in this monotone ("centered") order everywhere; FFT order only
exists transiently inside the transforms.

The nodes of a PhaseGrid form the lattice on which the discrete Weyl system
is exact, so symbols and Fourier-Weyl transforms share a single grid.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PhaseGrid:
    d: int = 1
    n: int = 64
    L: float = 16.0

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.n < 4:
            raise ValueError(f"n must be >= 4, got {self.n}")
        if not self.L > 0 or not np.isfinite(self.L):
            raise ValueError(f"L must be positive and finite, got {self.L}")

    @property
    def h(self) -> float:
        return self.L / self.n

    @property
    def dxi(self) -> float:
        return TWO_PI / self.L

    @property
    def xi_period(self) -> float:
        return TWO_PI * self.n / self.L

    @property
    def x(self) -> np.ndarray:
        """Position nodes of one axis (monotone)."""
        return (np.arange(self.n) - self.n // 2) * self.h

    @property
    def xi(self) -> np.ndarray:
        """Momentum nodes of one axis (monotone)."""
        return (np.arange(self.n) - self.n // 2) * self.dxi

    @property
    def cell(self) -> float:
        """Lebesgue volume of one phase-space cell, ``(2 pi / n)^d``."""
        return (self.h * self.dxi) ** self.d

    @property
    def mu_cell(self) -> float:
        """Cell volume for the normalized measure ``dz / (2 pi)^d``."""
        return float(self.n) ** (-self.d)

    @property
    def shape(self) -> tuple:
        return (self.n,) * (2 * self.d)

    @property
    def dim(self) -> int:
        """Dimension of the discretized Hilbert space, ``n^d``."""
        return self.n ** self.d

    @property
    def periods(self) -> np.ndarray:
        return np.array([self.L] * self.d + [self.xi_period] * self.d)

    @property
    def spacings(self) -> np.ndarray:
        return np.array([self.h] * self.d + [self.dxi] * self.d)

    def mesh(self) -> tuple:
        """Coordinate arrays ``(x_1..x_d, xi_1..xi_d)`` broadcast to the grid."""
        axes = [self.x] * self.d + [self.xi] * self.d
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def positions(self) -> np.ndarray:
        """Position coordinates of the ``n^d`` Hilbert-space nodes, shape (n^d, d)."""
        axes = np.meshgrid(*([self.x] * self.d), indexing="ij")
        return np.stack([a.ravel() for a in axes], axis=-1)

    def node(self, index) -> "PhasePoint":
        """Phase point at integer grid offsets ``index`` (length 2d, centered)."""
        index = np.asarray(index, dtype=float)
        return PhasePoint(index[: self.d] * self.h, index[self.d:] * self.dxi)

    def random_node(self, rng, spread: float = 0.25) -> "PhasePoint":
        """Random lattice point within ``spread`` of each half-period."""
        half = max(1, int(spread * self.n / 2))
        return self.node(rng.integers(-half, half + 1, size=2 * self.d))


@dataclass(frozen=True)
class PhasePoint:
    x: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        xi = np.atleast_1d(np.asarray(self.xi, dtype=float))
        if x.shape != xi.shape or x.ndim != 1:
            raise ValueError("x and xi must be vectors of equal length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(xi))):
            raise ValueError("phase point components must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "xi", xi)

    @property
    def d(self) -> int:
        return self.x.size

    @classmethod
    def zero(cls, d: int = 1) -> "PhasePoint":
        return cls(np.zeros(d), np.zeros(d))

    @classmethod
    def from_vector(cls, v) -> "PhasePoint":
        v = np.asarray(v, dtype=float)
        d = v.size // 2
        return cls(v[:d], v[d:])

    def vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.xi])

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(self.x + other.x, self.xi + other.xi)

    def __sub__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(self.x - other.x, self.xi - other.xi)

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(-self.x, -self.xi)

    def __mul__(self, c: float) -> "PhasePoint":
        return PhasePoint(c * self.x, c * self.xi)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Symbol:
    grid: PhaseGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.size != self.grid.n ** (2 * self.grid.d):
            raise ValueError(
                f"expected {self.grid.n ** (2 * self.grid.d)} values, got {v.size}")
        v = v.reshape(self.grid.shape)
        if not np.all(np.isfinite(v)):
            raise ValueError("symbol values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def _check(self, other: "Symbol"):
        if other.grid != self.grid:
            raise ValueError("symbols live on different grids")

    def __add__(self, other):
        if isinstance(other, Symbol):
            self._check(other)
            return Symbol(self.grid, self.values + other.values)
        return Symbol(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Symbol):
            self._check(other)
            return Symbol(self.grid, self.values - other.values)
        return Symbol(self.grid, self.values - other)

    def __mul__(self, other):
        if isinstance(other, Symbol):
            self._check(other)
            return Symbol(self.grid, self.values * other.values)
        return Symbol(self.grid, self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return Symbol(self.grid, -self.values)

    def conj(self) -> "Symbol":
        return Symbol(self.grid, np.conj(self.values))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def lp_norm(self, p: float = 2.0) -> float:
        """Grid L^p norm with Lebesgue cell weight (``p = inf`` gives sup)."""
        return lp_norm(self.values, p, self.grid.cell)


def lp_norm(values: np.ndarray, p: float, cell: float) -> float:
    a = np.abs(np.asarray(values))
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    return float((np.sum(a ** p) * cell) ** (1.0 / p))


def _check_dim(grid_or_d, z: PhasePoint):
    d = grid_or_d.d if isinstance(grid_or_d, PhaseGrid) else grid_or_d
    if z.d != d:
        raise ValueError(f"phase point has dimension {z.d}, expected {d}")


def symplectic_form(z: PhasePoint, w: PhasePoint) -> float:
    """``sigma(z, w) = y.xi - x.eta`` for ``z = (x, xi)``, ``w = (y, eta)``."""
    if z.d != w.d:
        raise ValueError(f"dimension mismatch: {z.d} vs {w.d}")
    return float(w.x @ z.xi - z.x @ w.xi)


def sigma_on_grid(grid: PhaseGrid, z: PhasePoint) -> np.ndarray:
    """``sigma(z, w)`` for every node ``w`` of the grid."""
    _check_dim(grid, z)
    mesh = grid.mesh()
    d = grid.d
    out = np.zeros(grid.shape)
    for k in range(d):
        out += mesh[k] * z.xi[k] - z.x[k] * mesh[d + k]
    return out


def fft_frequencies(n: int, period: float) -> np.ndarray:
    """Angular frequencies of a length-``n`` FFT over ``period`` (FFT order)."""
    return TWO_PI * np.fft.fftfreq(n, d=period / n)


def shift_array(values: np.ndarray, offsets, periods, axes=None) -> np.ndarray:
    """Band-limited periodic translation ``f(. - offsets)`` by FFT phase ramps.

    Offsets that are integer multiples of the sample spacing reproduce a
    cyclic roll up to rounding.
    """
    values = np.asarray(values, dtype=complex)
    if axes is None:
        axes = tuple(range(values.ndim))
    out = values
    for ax, s, per in zip(axes, offsets, periods):
        if s == 0.0:
            continue
        n = values.shape[ax]
        k = fft_frequencies(n, per)
        ramp = np.exp(-1j * k * s)
        shape = [1] * values.ndim
        shape[ax] = n
        out = np.fft.ifft(np.fft.fft(out, axis=ax) * ramp.reshape(shape), axis=ax)
    return out


def shift_function(f: Symbol, z: PhasePoint) -> Symbol:
    """Phase-space shift ``alpha_z(f) = f(. - z)`` on the periodic grid."""
    _check_dim(f.grid, z)
    g = f.grid
    return Symbol(g, shift_array(f.values, z.vector(), g.periods))


def modulate_function(f: Symbol, z: PhasePoint) -> Symbol:
    """``gamma_z(f)(w) = exp(i sigma(z, w)) f(w)``."""
    return Symbol(f.grid, np.exp(1j * sigma_on_grid(f.grid, z)) * f.values)


def roll_symbol(values: np.ndarray, index) -> np.ndarray:
    """Exact lattice shift by integer node offsets (``f(. - index)``)."""
    return np.roll(values, tuple(int(i) for i in index), axis=tuple(range(len(index))))


# ---------------------------------------------------------------------------
# symbol families

def _bump(r2: np.ndarray) -> np.ndarray:
    out = np.zeros_like(r2)
    inside = r2 < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
    return out


def make_symbol(family: str, grid: PhaseGrid, **params) -> Symbol:
    """Sample a named closed-form family on ``grid``.

    Families and parameters:

    ``gaussian``    ``exp(-|z - center|^2 / (2 width^2))``; ``center``, ``width``, ``amplitude``
    ``cos_sin``     ``prod_k cos(x_k) sin(xi_k)``; optional ``freq`` scaling both axes
    ``plane_wave``  ``exp(i sigma(w, z))`` for ``w`` = ``point`` (PhasePoint or 2d vector)
    ``bump``        smooth compact bump of ``radius`` around ``center``
    ``cos_sin_bump`` cos_sin truncated by a bump of ``radius``
    ``imported``    read the symbol CSV at ``path``
    """
    d = grid.d
    if family == "imported":
        sym = read_symbol_csv(params["path"])
        if sym.grid != grid:
            raise ValueError(f"imported grid {sym.grid} does not match {grid}")
        return sym
    mesh = grid.mesh()
    center = np.asarray(params.get("center", np.zeros(2 * d)), dtype=float)
    if center.size != 2 * d:
        raise ValueError("center must have length 2d")
    r2 = sum((m - c) ** 2 for m, c in zip(mesh, center))
    if family == "gaussian":
        width = float(params.get("width", 1.0))
        amp = params.get("amplitude", 1.0)
        vals = amp * np.exp(-r2 / (2.0 * width ** 2))
    elif family == "cos_sin":
        freq = float(params.get("freq", 1.0))
        vals = np.ones(grid.shape)
        for k in range(d):
            vals = vals * np.cos(freq * mesh[k]) * np.sin(freq * mesh[d + k])
    elif family == "plane_wave":
        w = params["point"]
        if not isinstance(w, PhasePoint):
            w = PhasePoint.from_vector(w)
        vals = np.exp(1j * sigma_on_grid(grid, w))
    elif family == "bump":
        radius = float(params.get("radius", 4.0))
        vals = _bump(r2 / radius ** 2)
    elif family == "cos_sin_bump":
        radius = float(params.get("radius", 4.0))
        vals = make_symbol("cos_sin", grid).values * _bump(r2 / radius ** 2)
    else:
        raise ValueError(f"unknown symbol family {family!r}")
    return Symbol(grid, vals)


# ---------------------------------------------------------------------------
# CSV import / export

def _header(kind: str, grid: PhaseGrid) -> str:
    return f"# qha-{kind} d={grid.d} n={grid.n} L={grid.L!r}"


def _parse_header(line: str, kind: str) -> PhaseGrid:
    parts = line.strip().split()
    if len(parts) != 5 or parts[0] != "#" or parts[1] != f"qha-{kind}":
        raise ValueError(f"malformed qha-{kind} header: {line.strip()!r}")
    try:
        kv = dict(p.split("=", 1) for p in parts[2:])
        return PhaseGrid(d=int(kv["d"]), n=int(kv["n"]), L=float(kv["L"]))
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed qha-{kind} header: {line.strip()!r}") from exc


def write_symbol_csv(f: Symbol, path) -> Path:
    path = Path(path)
    buf = io.StringIO()
    buf.write(_header("symbol", f.grid) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    for idx in np.ndindex(f.grid.shape):
        v = f.values[idx]
        w.writerow([*idx, repr(float(v.real)), repr(float(v.imag))])
    path.write_text(buf.getvalue())
    return path


def read_symbol_csv(path) -> Symbol:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty symbol file")
    grid = _parse_header(lines[0], "symbol")
    vals = np.full(grid.shape, np.nan, dtype=complex)
    nd = 2 * grid.d
    for lineno, row in enumerate(csv.reader(lines[1:]), start=2):
        if len(row) != nd + 2:
            raise ValueError(f"{path}:{lineno}: expected {nd + 2} fields, got {len(row)}")
        try:
            idx = tuple(int(r) for r in row[:nd])
            vals[idx] = complex(float(row[nd]), float(row[nd + 1]))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}:{lineno}: bad row {row}") from exc
    if np.isnan(vals.real).any():
        raise ValueError(f"{path}: missing symbol entries")
    return Symbol(grid, vals)
