"""Phase-space derivatives of symbols and operators and the norms built on them.

Direction ``j`` of a multi-index runs over ``x_1..x_d, xi_1..xi_d``.  Operator
derivatives follow the shift action: ``d_j A = lim (alpha_(t e_j) A - A) / t``.
Symbol derivatives are the ordinary partial derivatives, so that
``d^a op_weyl(f) = (-1)^|a| op_weyl(d^a f)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .phase_space import PhaseGrid, PhasePoint, Symbol, fft_frequencies, lp_norm
from .report import NormReport
from .weyl_system import OperatorRep, generator, op_shift

MAX_ORDER = 8
COND_MAX = 1e8
STEP_FLOOR = 1e-6  # in units of the grid spacing of the direction


@dataclass(frozen=True)
class MultiIndex:
    entries: tuple

    def __post_init__(self):
        e = tuple(int(a) for a in self.entries)
        if any(a < 0 for a in e):
            raise ValueError("multi-index entries must be non-negative")
        object.__setattr__(self, "entries", e)

    @classmethod
    def unit(cls, j: int, dim: int) -> "MultiIndex":
        e = [0] * dim
        e[j] = 1
        return cls(tuple(e))

    @property
    def order(self) -> int:
        return sum(self.entries)

    def factorial(self) -> int:
        return math.prod(math.factorial(a) for a in self.entries)

    def monomial(self, coords) -> np.ndarray:
        """``w^alpha`` for coordinate arrays ``coords`` (one per direction)."""
        out = np.ones_like(np.asarray(coords[0], dtype=float))
        for c, a in zip(coords, self.entries):
            if a:
                out = out * np.asarray(c) ** a
        return out

    def directions(self) -> list:
        """Direction sequence realizing the iterated derivative."""
        return [j for j, a in enumerate(self.entries) for _ in range(a)]

    def __len__(self):
        return len(self.entries)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __le__(self, other: "MultiIndex") -> bool:
        return all(a <= b for a, b in zip(self.entries, other.entries))


def _as_index(alpha, dim: int) -> MultiIndex:
    if not isinstance(alpha, MultiIndex):
        alpha = MultiIndex(tuple(alpha))
    if len(alpha) != dim:
        raise ValueError(f"multi-index has length {len(alpha)}, expected {dim}")
    return alpha


def multi_indices(dim: int, max_order: int, min_order: int = 0):
    """All multi-indices of length ``dim`` with ``min_order <= |a| <= max_order``, by order."""
    out = []
    for k in range(min_order, max_order + 1):
        for combo in itertools.combinations_with_replacement(range(dim), k):
            e = [0] * dim
            for j in combo:
                e[j] += 1
            out.append(MultiIndex(tuple(e)))
    # stable, deterministic: by order then reverse-lex
    return sorted(set(out), key=lambda a: (a.order, tuple(-x for x in a.entries)))


# ---------------------------------------------------------------------------
# symbols

def symbol_derivative(f: Symbol, alpha) -> Symbol:
    """Spectral partial derivative ``d^alpha f`` on the periodic grid."""
    g = f.grid
    alpha = _as_index(alpha, 2 * g.d)
    vals = f.values
    for ax, a in enumerate(alpha.entries):
        if a == 0:
            continue
        k = fft_frequencies(g.n, g.periods[ax])
        mult = (1j * k) ** a
        if a % 2 and g.n % 2 == 0:
            mult[g.n // 2] = 0.0  # Nyquist mode has no odd derivative
        shape = [1] * vals.ndim
        shape[ax] = g.n
        vals = np.fft.ifftshift(vals, axes=ax)
        vals = np.fft.ifft(np.fft.fft(vals, axis=ax) * mult.reshape(shape), axis=ax)
        vals = np.fft.fftshift(vals, axes=ax)
    return Symbol(g, vals)


# ---------------------------------------------------------------------------
# operators

def _fd_first(A: OperatorRep, j: int, t: float, richardson: int) -> OperatorRep:
    d = A.grid.d

    def central(s):
        e = np.zeros(2 * d)
        e[j] = s
        z = PhasePoint.from_vector(e)
        return (op_shift(A, z).matrix - op_shift(A, -z).matrix) / (2 * s)

    D = central(t)
    for level in range(richardson):
        Dh = central(t / 2 ** (level + 1))
        D = (4 ** (level + 1) * Dh - D) / (4 ** (level + 1) - 1)
    return OperatorRep(A.grid, D)


def _commutator_first(A: OperatorRep, j: int) -> OperatorRep:
    G = generator(A.grid, j)
    M = A.matrix
    return OperatorRep(A.grid, 1j * (G @ M - M @ G))


def default_step(grid: PhaseGrid) -> float:
    return 1e-3 * grid.L


def derivative(A: OperatorRep, alpha, scheme: str = "commutator",
               step: float | None = None, richardson: int = 1,
               max_order: int = MAX_ORDER) -> OperatorRep:
    """``d^alpha A`` by iterated commutators or central finite differences."""
    g = A.grid
    alpha = _as_index(alpha, 2 * g.d)
    if alpha.order > max_order:
        raise ValueError(f"order {alpha.order} exceeds max order {max_order}")
    if scheme not in ("commutator", "finite_diff"):
        raise ValueError(f"unknown scheme {scheme!r}")
    t = default_step(g) if step is None else float(step)
    if scheme == "finite_diff":
        floor = STEP_FLOOR * min(g.h, g.dxi) * 2 ** richardson
        if not t > floor:
            raise ValueError(f"step {t} below spacing floor {floor}")
    out = A
    for j in alpha.directions():
        out = _commutator_first(out, j) if scheme == "commutator" else _fd_first(out, j, t, richardson)
    return out


@dataclass
class DerivativeTable:
    """``alpha -> (d^alpha A, truncation error estimate)`` through some order."""

    operator: OperatorRep
    entries: dict = field(default_factory=dict)
    label: str = ""

    @property
    def max_order(self) -> int:
        return max((a.order for a in self.entries), default=-1)

    def __getitem__(self, alpha) -> OperatorRep:
        alpha = _as_index(alpha, 2 * self.operator.grid.d)
        if alpha not in self.entries:
            raise KeyError(f"multi-index {alpha.entries} not in table")
        return self.entries[alpha][0]

    def items(self, max_order: int | None = None):
        for a in sorted(self.entries, key=lambda a: (a.order, tuple(-x for x in a.entries))):
            if max_order is None or a.order <= max_order:
                yield a, self.entries[a][0]


def derivative_table(A: OperatorRep, order: int, scheme: str = "commutator",
                     label: str = "", **kwargs) -> DerivativeTable:
    """All ``d^alpha A`` with ``|alpha| <= order``; each level reuses the previous one."""
    if order > MAX_ORDER:
        raise ValueError(f"order {order} exceeds max order {MAX_ORDER}")
    dim = 2 * A.grid.d
    tab = DerivativeTable(A, {MultiIndex((0,) * dim): (A, 0.0)}, label)
    for alpha in multi_indices(dim, order, 1):
        j = alpha.directions()[-1]
        parent = alpha - MultiIndex.unit(j, dim)
        prev = tab.entries[parent][0]
        if scheme == "commutator":
            tab.entries[alpha] = (_commutator_first(prev, j), 0.0)
        else:
            t = kwargs.get("step", default_step(A.grid))
            r = kwargs.get("richardson", 1)
            D = _fd_first(prev, j, t, r)
            D0 = _fd_first(prev, j, t, max(r - 1, 0)) if r else D
            err = float(np.abs(D.matrix - D0.matrix).max())
            tab.entries[alpha] = (D, err)
    return tab


def schatten_norm(A: OperatorRep, p: float) -> float:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    s = np.linalg.svd(A.matrix, compute_uv=False)
    if np.isinf(p):
        return float(s[0]) if s.size else 0.0
    return float(np.sum(s ** p) ** (1.0 / p))


def op_norm(A: OperatorRep) -> float:
    return schatten_norm(A, np.inf)


def ck_norm(table: DerivativeTable, k: int) -> float:
    if table.max_order < k:
        raise ValueError(f"table populated through order {table.max_order}, need {k}")
    return max(op_norm(D) for _, D in table.items(k))


def sobolev_norm(obj, k: int, p: float) -> float:
    """``sum_{|a| <= k}`` of L^p norms of ``d^a f`` (symbols) or Schatten-p norms of ``d^a A``."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if isinstance(obj, Symbol):
        return float(sum(lp_norm(symbol_derivative(obj, a).values, p, obj.grid.cell)
                         for a in multi_indices(2 * obj.grid.d, k)))
    if isinstance(obj, DerivativeTable):
        if obj.max_order < k:
            raise ValueError(f"table populated through order {obj.max_order}, need {k}")
        return float(sum(schatten_norm(D, p) for _, D in obj.items(k)))
    raise TypeError(f"unsupported object {type(obj).__name__}")


def sup_derivatives(f: Symbol, k: int) -> float:
    """``max_{|a| <= k} ||d^a f||_inf``."""
    return max(symbol_derivative(f, a).max_abs() for a in multi_indices(2 * f.grid.d, k))


# ---------------------------------------------------------------------------
# derivative algebra

def verify_derivative_algebra(A: OperatorRep, B: OperatorRep, direction: int = 0,
                              scheme: str = "finite_diff", step: float | None = None,
                              tolerance: float = 1e-5) -> NormReport:
    """Defects of the product, inverse and quotient rules in one direction."""
    if A.grid != B.grid:
        raise ValueError("operators live on different grids")
    dim = 2 * A.grid.d
    e = MultiIndex.unit(direction, dim)

    def D(X):
        return derivative(X, e, scheme=scheme, step=step).matrix

    def defect(M):
        return float(np.abs(M).max())

    a, b = A.matrix, B.matrix
    rep = NormReport()
    anchor_prod = "Product rule: d_j(AB) = (d_j A)B + A(d_j B)"
    rep.add("product_rule", defect(D(A @ B) - D(A) @ b - a @ D(B)), tolerance, anchor_prod)
    cond = float(np.linalg.cond(b))
    if not np.isfinite(cond) or cond > COND_MAX:
        rep.add("inverse_rules_skipped_condition_number", cond, None,
                "Derivative of inverse: B invertible")
        return rep
    Bi = B.inverse()
    bi, dB, dA = Bi.matrix, D(B), D(A)
    rep.add("inverse_rule", defect(D(Bi) + bi @ dB @ bi), tolerance,
            "Derivative of inverse: d_j B^-1 = -B^-1 (d_j B) B^-1")
    rep.add("quotient_rule_right", defect(D(A @ Bi) - dA @ bi + a @ bi @ dB @ bi), tolerance,
            "Quotient rule: d_j(AB^-1) = (d_j A)B^-1 - AB^-1(d_j B)B^-1")
    rep.add("quotient_rule_left", defect(D(Bi @ A) + bi @ dB @ bi @ a - bi @ dA), tolerance,
            "Quotient rule: d_j(B^-1 A) = -B^-1(d_j B)B^-1 A + B^-1(d_j A)")
    return rep
