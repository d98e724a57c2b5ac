"""Heisenberg-analyticity diagnostics: factorial-decay fits of derivative
norms, Taylor coefficients of ``z -> alpha_z(A)`` and inversion of operator
power series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .calculus import (COND_MAX, MAX_ORDER, DerivativeTable, MultiIndex, derivative_table,
                       multi_indices, op_norm, symbol_derivative)
from .phase_space import PhasePoint, Symbol
from .weyl_system import OperatorRep, op_shift

DEFAULT_R_GRID = tuple(float(r) for r in np.round(np.geomspace(0.125, 4.0, 21), 12)) + (1.0,)
MIN_FIT_ORDER = 6


@dataclass(frozen=True)
class AnalyticityFit:
    """``C(R) = max_b ||d^b .|| R^|b| / b!`` over ``R_grid`` and the selected radius."""

    orders_used: int
    C: float
    R: float
    per_order_slack: tuple
    R_grid: tuple
    C_of_R: tuple
    stabilized: bool
    norms: dict = field(default_factory=dict, repr=False)

    def C_at(self, R: float) -> float:
        for r, c in zip(self.R_grid, self.C_of_R):
            if r == R:
                return c
        return _constant(self.norms, R)[0]

    def to_dict(self) -> dict:
        return {"orders_used": self.orders_used, "C": self.C, "R": self.R,
                "per_order_slack": list(self.per_order_slack), "R_grid": list(self.R_grid),
                "C_of_R": list(self.C_of_R), "stabilized": self.stabilized}


def _norm_map(source) -> dict:
    """``MultiIndex -> sup norm`` from a table, a symbol or an explicit map."""
    if isinstance(source, DerivativeTable):
        return {a: op_norm(D) for a, D in source.items()}
    if isinstance(source, dict):
        return {(a if isinstance(a, MultiIndex) else MultiIndex(tuple(a))): float(v)
                for a, v in source.items()}
    raise TypeError(f"unsupported derivative source {type(source).__name__}")


def _constant(norms: dict, R: float):
    top = max(a.order for a in norms)
    slack = [0.0] * (top + 1)
    for a, v in norms.items():
        slack[a.order] = max(slack[a.order], v * R ** a.order / a.factorial())
    return max(slack), slack


def analyticity_fit(source, R_grid=DEFAULT_R_GRID, min_order: int = MIN_FIT_ORDER) -> AnalyticityFit:
    """Largest ``R`` in ``R_grid`` whose per-order slack is non-increasing over the top three orders."""
    norms = _norm_map(source)
    if not norms:
        raise ValueError("derivative table is empty")
    top = max(a.order for a in norms)
    if top < min_order:
        raise ValueError(f"derivatives through order {min_order} required, got {top}")
    grid = tuple(sorted(set(float(r) for r in R_grid)))
    if not grid or grid[0] <= 0:
        raise ValueError("R_grid must contain positive radii")
    results = [_constant(norms, R) for R in grid]
    chosen = None
    for R, (C, slack) in zip(grid, results):
        tail = slack[-3:]
        if np.isfinite(C) and tail[0] >= tail[1] >= tail[2]:
            chosen = (R, C, slack)
    stabilized = chosen is not None
    if chosen is None:
        chosen = (grid[0],) + results[0]
    R, C, slack = chosen
    return AnalyticityFit(top, float(C), float(R), tuple(slack), grid,
                          tuple(float(c) for c, _ in results), stabilized, norms)


def symbol_derivative_norms(f: Symbol, order: int) -> dict:
    """``||d^b f||_inf`` on the grid for all ``|b| <= order``."""
    return {a: symbol_derivative(f, a).max_abs() for a in multi_indices(2 * f.grid.d, order)}


# ---------------------------------------------------------------------------
# closed-form cos(x) sin(xi)

def _trig_derivative(kind: str, k: int):
    """``k``-th derivative of cos or sin as a callable."""
    shift = k * np.pi / 2
    if kind == "cos":
        return lambda t: np.cos(t + shift)
    return lambda t: np.sin(t + shift)


def _sup_on_line(func, period: float = 2 * np.pi, samples: int = 4097) -> float:
    t = np.linspace(0.0, period, samples)
    v = np.abs(func(t))
    i = int(np.argmax(v))
    lo, hi = t[max(i - 1, 0)], t[min(i + 1, samples - 1)]
    res = minimize_scalar(lambda s: -abs(func(s)), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-14})
    return float(max(v[i], -res.fun))


def cos_sin_derivative_norms(d: int, order: int) -> dict:
    """``sup |d^b prod_k cos(x_k) sin(xi_k)|`` by dense sampling and bounded refinement."""
    out = {}
    cache = {}
    for a in multi_indices(2 * d, order):
        val = 1.0
        for k in range(d):
            for kind, m in (("cos", a.entries[k]), ("sin", a.entries[d + k])):
                key = (kind, m % 4)
                if key not in cache:
                    cache[key] = _sup_on_line(_trig_derivative(kind, m))
                val *= cache[key]
        out[a] = val
    return out


# ---------------------------------------------------------------------------
# power series of the shift action

def series_coefficients(A: OperatorRep, max_order: int, table: DerivativeTable | None = None) -> dict:
    """``b_beta = d^beta A / beta!`` so that ``alpha_z(A) = sum b_beta z^beta``."""
    if max_order > MAX_ORDER:
        raise ValueError(f"order {max_order} exceeds max order {MAX_ORDER}")
    table = table or derivative_table(A, max_order)
    return {a: D * (1.0 / a.factorial()) for a, D in table.items(max_order)}


def evaluate_series(coeffs: dict, z, max_order: int | None = None) -> OperatorRep:
    """``sum_{|b| <= max_order} b_beta z^beta``."""
    zv = z.vector() if isinstance(z, PhasePoint) else np.asarray(z, dtype=float)
    items = [(a, B) for a, B in coeffs.items() if max_order is None or a.order <= max_order]
    grid = items[0][1].grid
    out = np.zeros((grid.dim, grid.dim), dtype=complex)
    for a, B in sorted(items, key=lambda t: (t[0].order, t[0].entries)):
        out = out + float(a.monomial(list(zv))) * B.matrix
    return OperatorRep(grid, out)


def taylor_remainder(A: OperatorRep, z, order: int, coeffs: dict | None = None) -> float:
    """``||alpha_z(A) - sum_{|b| <= order} b_beta z^beta||_op``."""
    coeffs = coeffs or series_coefficients(A, order)
    zp = z if isinstance(z, PhasePoint) else PhasePoint.from_vector(z)
    return op_norm(op_shift(A, zp) - evaluate_series(coeffs, zp, order))


def remainder_ratio(A: OperatorRep, direction, order: int = 2, size: float = 0.1) -> float:
    """Remainder at ``size * direction`` over the remainder at half that size."""
    coeffs = series_coefficients(A, order)
    v = np.asarray(direction, dtype=float)
    return taylor_remainder(A, size * v, order, coeffs) / taylor_remainder(A, 0.5 * size * v, order, coeffs)


def invert_series(coeffs: dict, max_order: int) -> dict:
    """Coefficients of ``g`` with ``(sum a_alpha z^alpha) g(z) = I``.

    ``b_0 = a_0^-1`` and ``b_beta = -a_0^-1 sum_{alpha < beta} a_(beta - alpha) b_alpha``
    with ``alpha < beta`` componentwise and ``alpha != beta``.
    """
    if max_order > MAX_ORDER:
        raise ValueError(f"order {max_order} exceeds max order {MAX_ORDER}")
    zero = next(a for a in coeffs if a.order == 0)
    a0 = coeffs[zero]
    cond = float(np.linalg.cond(a0.matrix))
    if not np.isfinite(cond) or cond > COND_MAX:
        raise ValueError(f"leading coefficient is singular (condition number {cond:.3g})")
    a0_inv = a0.inverse()
    dim = len(zero)
    b = {zero: a0_inv}
    for beta in multi_indices(dim, max_order, 1):
        acc = np.zeros_like(a0.matrix)
        for alpha, Balpha in b.items():
            if alpha <= beta and alpha != beta:
                diff = beta - alpha
                if diff in coeffs:
                    acc = acc + coeffs[diff].matrix @ Balpha.matrix
        b[beta] = OperatorRep(a0.grid, -a0_inv.matrix @ acc)
    return b


def compose_series(a: dict, b: dict, max_order: int) -> dict:
    """Cauchy product coefficients of ``(sum a z^alpha)(sum b z^beta)`` through ``max_order``."""
    dim = len(next(iter(a)))
    out = {}
    for gamma in multi_indices(dim, max_order):
        acc = None
        for alpha, Aa in a.items():
            if alpha <= gamma and (gamma - alpha) in b:
                term = Aa.matrix @ b[gamma - alpha].matrix
                acc = term if acc is None else acc + term
        grid = next(iter(a.values())).grid
        out[gamma] = OperatorRep(grid, acc if acc is not None else np.zeros((grid.dim, grid.dim), complex))
    return out
