"""Verification suites.  Each returns a :class:`NormReport` whose entries
carry their own tolerance, so the verdict is always derivable.

Suites receive a ``SuiteConfig`` and an order-preserving parallel map; they
never start workers themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .analytic import (analyticity_fit, compose_series, cos_sin_derivative_norms, invert_series,
                       remainder_ratio, series_coefficients, symbol_derivative_norms)
from .calculus import (ck_norm, derivative, derivative_table, multi_indices, op_norm,
                       sup_derivatives, symbol_derivative, verify_derivative_algebra)
from .convolution import (cordes_kernel, cv_bound, kernel_identity_defect, reverse_cv_bound)
from .families import localized_random_operator, random_band_limited_symbol, symbol_family
from .finite import exhaustive_verify
from .fourier import (calibrate_fw_constant, fourier_sigma, fourier_sigma_naive, fourier_weyl,
                      fourier_weyl_inverse, fourier_weyl_inverse_naive, fourier_weyl_naive,
                      shift_fourier_weyl)
from .phase_space import PhaseGrid, PhasePoint, Symbol, make_symbol, roll_symbol, sigma_on_grid
from .quantize import kernel_quadrature, n_tau, op_tau, op_weyl, symbol_of
from .report import NormReport
from .stft import (WindowSpec, mixed_norm_inf1, stft_function, stft_function_naive, stft_operator,
                   stft_operator_pointwise)
from .weyl_system import (HALF, OperatorRep, op_modulate, op_shift, weyl_matrix, weyl_multiplier)

SUITES = ("algebra", "fourier", "quantize", "calculus", "stft", "cv", "finite", "analytic",
          "determinism")


@dataclass(frozen=True)
class SuiteConfig:
    d: int = 1
    n: int = 64
    L: float = 16.0
    N: tuple = (3, 5, 7)
    seed: int = 0
    workers: int = 1
    suites: tuple = SUITES
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
        PhaseGrid(self.d, self.n, self.L)  # validates grid parameters
        for m in self.N:
            if m < 3 or m % 2 == 0 or m > 13:
                raise ValueError(f"finite modulus must be odd with 3 <= N <= 13, got {m}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def grid(self) -> PhaseGrid:
        return PhaseGrid(self.d, self.n, self.L)

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def echo(self) -> dict:
        return {"d": self.d, "n": self.n, "L": self.L, "N": list(self.N), "seed": self.seed,
                "workers": self.workers, "suites": list(self.suites),
                "tolerances": dict(sorted(self.tolerances.items()))}


def _max(values) -> float:
    return float(max(values)) if len(values) else 0.0


def relative_change(coarse: float, fine: float) -> float:
    """Refinement change measured against the finer grid."""
    return abs(coarse - fine) / abs(fine)


# ---------------------------------------------------------------------------
# criterion 2: continuum Weyl algebra

def suite_algebra(cfg: SuiteConfig, pmap=map) -> NormReport:
    g = cfg.grid
    rng = cfg.rng(2)
    rep = NormReport()

    def ccr(_):
        z, w = g.random_node(rng), g.random_node(rng)
        lhs = weyl_matrix(g, z) @ weyl_matrix(g, w)
        return float(np.abs(lhs - weyl_multiplier(z, w) * weyl_matrix(g, z + w)).max())

    rep.add("ccr_defect", _max([ccr(k) for k in range(50)]), 1e-9,
            "W_z W_w = e^{i sigma(z,w)/2} W_{z+w}")

    A = OperatorRep(g, rng.normal(size=(g.dim, g.dim)) + 1j * rng.normal(size=(g.dim, g.dim)))
    group = []
    for _ in range(20):
        z, w = g.random_node(rng), g.random_node(rng)
        group.append(np.abs((op_shift(op_shift(A, w), z) - op_shift(A, z + w)).matrix).max())
    rep.add("shift_group_law_defect", _max(group), 1e-9, "alpha_z alpha_w = alpha_{z+w}")

    # intertwining relations for lattice z
    f = Symbol(g, rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape))
    Ff, FA = fourier_sigma(f).values, fourier_weyl(A).values
    scale = np.abs(FA).max()
    d_sig_shift, d_fw_shift, d_fw_mod = [], [], []
    for _ in range(10):
        k = rng.integers(-(g.n // 2), g.n // 2, size=2 * g.d)
        z = g.node(k)
        gam = np.exp(1j * sigma_on_grid(g, z))
        shifted = Symbol(g, roll_symbol(f.values, k))
        d_sig_shift.append(np.abs(fourier_sigma(shifted).values - gam * Ff).max())
        d_fw_shift.append(np.abs(fourier_weyl(op_shift(A, z)).values - gam * FA).max() / scale)
        k2 = 2 * (k // 2)  # even offsets keep z/2 on the lattice
        FA_shift = shift_fourier_weyl(Symbol(g, FA), k2).values
        d_fw_mod.append(np.abs(fourier_weyl(op_modulate(A, g.node(k2))).values - FA_shift).max() / scale)
    rep.add("fsigma_shift_to_modulation", _max(d_sig_shift), 1e-9,
            "F_sigma(alpha_z f) = gamma_z F_sigma(f)")
    rep.add("fw_shift_to_modulation", _max(d_fw_shift), 1e-9,
            "F_W(alpha_z A) = gamma_z F_W(A) (relative to max |F_W A|)")
    rep.add("fw_modulation_to_shift", _max(d_fw_mod), 1e-9,
            "F_W(gamma_z A) = alpha_z F_W(A) (relative to max |F_W A|)")

    # Plancherel after one-time calibration
    ref = OperatorRep(g, rng.normal(size=(g.dim, g.dim)) + 1j * rng.normal(size=(g.dim, g.dim)))
    c = calibrate_fw_constant(ref)
    defects = []
    for _ in range(20):
        B = OperatorRep(g, rng.normal(size=(g.dim, g.dim)) + 1j * rng.normal(size=(g.dim, g.dim)))
        hs2 = np.sum(np.abs(B.matrix) ** 2)
        defects.append(abs(c * g.cell * np.sum(np.abs(fourier_weyl(B).values) ** 2) - hs2) / hs2)
    rep.add("plancherel_constant", c * (2 * np.pi) ** g.d, None,
            "F_W unitary T^2 -> L^2 (calibrated constant times (2 pi)^d)")
    rep.add("plancherel_relative_defect", _max(defects), 1e-8, "F_W unitary T^2 -> L^2")
    return rep


# ---------------------------------------------------------------------------
# Fourier transforms and naive cross-checks

def suite_fourier(cfg: SuiteConfig, pmap=map) -> NormReport:
    g = cfg.grid
    rng = cfg.rng(10)
    rep = NormReport()
    f = Symbol(g, rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape))
    A = OperatorRep(g, rng.normal(size=(g.dim, g.dim)) + 1j * rng.normal(size=(g.dim, g.dim)))
    rep.add("fsigma_self_inverse", np.abs(fourier_sigma(fourier_sigma(f)).values - f.values).max(),
            1e-10, "F_sigma is self-inverse")
    rep.add("fw_round_trip", np.abs(fourier_weyl_inverse(fourier_weyl(A)).matrix - A.matrix).max(),
            1e-10, "F_W bijective with inverse int f(w) W_w dw")
    if g.n ** (2 * g.d) <= 256:
        rep.add("naive_fsigma", np.abs(fourier_sigma(f).values - fourier_sigma_naive(f).values).max(),
                1e-10, "plumbing")
        rep.add("naive_fw", np.abs(fourier_weyl(A).values - fourier_weyl_naive(A).values).max(),
                1e-10, "plumbing")
        h = fourier_weyl(A)
        rep.add("naive_fw_inverse", np.abs(fourier_weyl_inverse(h).matrix
                                           - fourier_weyl_inverse_naive(h).matrix).max(), 1e-10, "plumbing")
        win = make_symbol("gaussian", g, width=1.0)
        fast = stft_function(f, win, keep_full=True).full
        rep.add("naive_stft", np.abs(fast - stft_function_naive(f, win)).max(), 1e-10, "plumbing")
        rep.add("naive_checks_enabled", 1, None, "plumbing")
    else:
        rep.add("naive_checks_enabled", 0, None, "plumbing")
    return rep


# ---------------------------------------------------------------------------
# criterion 3: quantization

def suite_quantize(cfg: SuiteConfig, pmap=map) -> NormReport:
    g = cfg.grid
    rng = cfg.rng(3)
    rep = NormReport()
    small = PhaseGrid(1, 16, 4 * np.pi)
    cs = make_symbol("cos_sin", small)
    K = kernel_quadrature(lambda x, xi: np.cos(x[..., 0]) * np.sin(xi[..., 0]), small)
    rep.add("kernel_quadrature_defect", np.abs(op_weyl(cs).matrix - K.matrix).max(), 1e-6,
            "op^w(f) kernel int f((t+s)/2, xi) e^{i xi(t-s)} dxi / (2 pi)^d")
    one = Symbol(g, np.ones(g.shape))
    rep.add("op_of_one_defect", np.abs(op_weyl(one).matrix - np.eye(g.dim)).max(), 1e-8, "op^w(1) = I")
    trips = []
    for _ in range(5):
        f = random_band_limited_symbol(g, rng)
        trips.append(np.abs(symbol_of(op_weyl(f)).values - f.values).max())
    rep.add("round_trip_defect", _max(trips), 1e-8, "op^w bijective")
    f = random_band_limited_symbol(g, rng)
    A0 = op_tau(f, 0.0).matrix
    for tau in (-0.5, 0.25, 1.0):
        rep.add(f"n_tau_defect_tau{tau:g}", np.abs(op_tau(n_tau(f, tau), tau).matrix - A0).max(), 1e-8,
                "op^tau(N_tau f) = op^0(f)")
    return rep


# ---------------------------------------------------------------------------
# criterion 4: derivatives

def suite_calculus(cfg: SuiteConfig, pmap=map) -> NormReport:
    g = cfg.grid
    rng = cfg.rng(4)
    rep = NormReport()
    A = localized_random_operator(g, rng)
    dim = 2 * g.d
    agree, ratios = [], []
    for j in range(dim):
        e = np.eye(dim, dtype=int)[j]
        exact = derivative(A, e, "commutator").matrix
        agree.append(np.abs(derivative(A, e, "finite_diff").matrix - exact).max())
        t = 0.05 * min(g.h, g.dxi) * 8
        e1 = np.abs(derivative(A, e, "finite_diff", step=t, richardson=0).matrix - exact).max()
        e2 = np.abs(derivative(A, e, "finite_diff", step=t / 2, richardson=0).matrix - exact).max()
        ratios.append(e1 / e2)
    rep.add("fd_vs_commutator", _max(agree), 1e-5, "d_j A = lim (alpha_{t e_j}(A) - A)/t")
    rep.add("step_halving_ratio_min", min(ratios), (3.0, 5.0), "plumbing")
    rep.add("step_halving_ratio_max", max(ratios), (3.0, 5.0), "plumbing")
    B = OperatorRep.identity(g) + localized_random_operator(g, rng) * 0.3
    for j in range(dim):
        rep.extend(verify_derivative_algebra(A, B, direction=j), prefix=f"dir{j}_")
    f = make_symbol("gaussian", g, width=1.0)
    Af = op_weyl(f)
    tab = derivative_table(Af, 3)
    worst = 0.0
    for a, D in tab.items(3):
        target = op_weyl(symbol_derivative(f, a)).matrix * (-1) ** a.order
        worst = max(worst, float(np.abs(D.matrix - target).max()))
    rep.add("derivative_intertwining", worst, 1e-5, "d^a op^w(f) = (-1)^|a| op^w(d^a f)")
    return rep


# ---------------------------------------------------------------------------
# criterion 5: embedding constants

def embedding_constants(grid: PhaseGrid, pmap=map) -> dict:
    """Measured ratios of the embedding chain over the test-symbol family."""
    k = 2 * grid.d + 1
    window = WindowSpec("gaussian_symbol", 1.0)
    op_window = WindowSpec("gaussian_projector", 1.0)
    c = {"linf_le_minf1": 0.0, "minf1_le_cb": 0.0, "op_le_minf1": 0.0, "minf1_le_ck": 0.0}
    for _, f in symbol_family(grid):
        m_f = mixed_norm_inf1(stft_function(f, window, pmap=pmap))
        A = op_weyl(f)
        m_A = mixed_norm_inf1(stft_operator(A, op_window, pmap=pmap))
        c["linf_le_minf1"] = max(c["linf_le_minf1"], f.max_abs() / m_f)
        c["minf1_le_cb"] = max(c["minf1_le_cb"], m_f / sup_derivatives(f, k))
        c["op_le_minf1"] = max(c["op_le_minf1"], op_norm(A) / m_A)
        c["minf1_le_ck"] = max(c["minf1_le_ck"], m_A / ck_norm(derivative_table(A, k), k))
    return c


def suite_stft(cfg: SuiteConfig, pmap=map) -> NormReport:
    rep = NormReport()
    anchors = {"linf_le_minf1": "L^inf <= M^{inf,1}", "minf1_le_cb": "M^{inf,1} <= C_b^{2d+1}",
               "op_le_minf1": "L(H) <= M^{inf,1}(H)", "minf1_le_ck": "M^{inf,1}(H) <= C^{2d+1}(H)"}
    fine = cfg.grid
    coarse = PhaseGrid(fine.d, fine.n // 2, fine.L)
    cf = embedding_constants(fine, pmap)
    cc = embedding_constants(coarse, pmap)
    for key, anchor in anchors.items():
        rep.add(f"{key}_n{fine.n}", cf[key], (0.0, np.inf), anchor)
        rep.add(f"{key}_n{coarse.n}", cc[key], (0.0, np.inf), anchor)
        rep.add(f"{key}_refinement_change", relative_change(cc[key], cf[key]), 0.2, anchor)
    # operator STFT through the symbol route vs the literal Hilbert-Schmidt pairing
    g = fine
    rng = cfg.rng(5)
    A = localized_random_operator(g, rng)
    B = WindowSpec("gaussian_projector", 1.0).operator(g)
    full = stft_operator(A, B, keep_full=True, pmap=pmap).full
    c = g.n // 2
    worst = 0.0
    for _ in range(6):
        kz = rng.integers(-3, 4, size=2 * g.d)
        kw = 2 * rng.integers(-2, 3, size=2 * g.d)
        lit = stft_operator_pointwise(A, B, g.node(kz), g.node(kw))
        worst = max(worst, abs(full[tuple(kz + c) + tuple(kw + c)] - lit))
    rep.add("operator_stft_two_routes", worst, 1e-9,
            "<A, gamma_w alpha_z B> = <F_sigma F_W A, gamma_w alpha_z F_sigma F_W B>")
    return rep


# ---------------------------------------------------------------------------
# criterion 6: Schatten Calderon-Vaillancourt

def suite_cv(cfg: SuiteConfig, pmap=map) -> NormReport:
    g = cfg.grid
    rng = cfg.rng(6)
    rep = NormReport()
    K = cordes_kernel(g)
    K_coarse = cordes_kernel(PhaseGrid(g.d, g.n // 2, g.L))
    anchor = "K = op^w((1 - Delta)^-d delta_0) is trace class"
    rep.add(f"kernel_trace_norm_n{g.n}", K.trace_norm, None, anchor)
    rep.add(f"kernel_trace_norm_n{g.n // 2}", K_coarse.trace_norm, None, anchor)
    rep.add("kernel_trace_norm_refinement_change",
            relative_change(K_coarse.trace_norm, K.trace_norm), 0.1, anchor)
    fam = symbol_family(g)
    for p in (1, 2):
        for name, f in fam:
            rep.extend(cv_bound(f, p, K), prefix=f"{name}_")
    ops = [(f"localized_{k}", localized_random_operator(g, rng)) for k in range(4)]
    ops += [(f"op_{name}", op_weyl(f)) for name, f in fam[:4]]
    for name, A in ops:
        tab = derivative_table(A, 2 * g.d)
        for p in (1, 2):
            rep.extend(reverse_cv_bound(A, p, K, tab), prefix=f"{name}_")
    worst = _max([kernel_identity_defect(f, K) for _, f in fam])
    rep.add("kernel_identity_defect", worst, 1e-5, "op^w(f) = P(f) * K with P = (1 - Delta)^d")
    return rep


# ---------------------------------------------------------------------------
# criterion 1: finite group

def suite_finite(cfg: SuiteConfig, pmap=map) -> NormReport:
    rep = NormReport()
    for N, sub in zip(cfg.N, pmap(lambda m: exhaustive_verify(m, seed=cfg.seed), cfg.N)):
        rep.extend(sub, prefix=f"N{N}_")
    return rep


# ---------------------------------------------------------------------------
# criterion 7: analyticity

def suite_analytic(cfg: SuiteConfig, pmap=map) -> NormReport:
    rep = NormReport()
    norms = cos_sin_derivative_norms(1, 8)
    rep.add("cos_sin_derivative_sup_defect", max(abs(v - 1.0) for v in norms.values()), 1e-10,
            "||d^a cos(x) sin(xi)||_inf = 1")
    fit = analyticity_fit(norms)
    rep.add("cos_sin_C_at_R1_defect", abs(fit.C_at(1.0) - 1.0), 1e-10, "C = 1 at R = 1")
    rep.add("cos_sin_fit_radius", fit.R, None, "||d^b f||_inf <= C b!/R^|b|")
    g = cfg.grid
    A = op_weyl(make_symbol("cos_sin", g))
    op_fit = analyticity_fit(derivative_table(A, 8))
    rep.add("operator_fit_stabilized", int(op_fit.stabilized), (1, 1),
            "op^w(f) Heisenberg-analytic when f is uniformly analytic")
    rep.add("operator_fit_radius", op_fit.R, (1e-300, np.inf),
            "op^w(f) Heisenberg-analytic when f is uniformly analytic")
    rep.add("operator_fit_constant", op_fit.C, None,
            "op^w(f) Heisenberg-analytic when f is uniformly analytic")
    zero = analyticity_fit({a: 0.0 for a in multi_indices(2, 8)})
    rep.add("zero_symbol_constant", zero.C, 0.0, "plumbing")
    B = OperatorRep.identity(g) + op_weyl(make_symbol("gaussian", g, width=1.0)) * 0.2
    a = series_coefficients(B, 4)
    b = invert_series(a, 4)
    comp = compose_series(a, b, 4)
    eye = np.eye(g.dim)
    rep.add("invert_series_composition", max(np.abs(M.matrix - (eye if k.order == 0 else 0)).max()
                                             for k, M in comp.items()), 1e-8,
            "b_beta = -a_0^-1 sum a_(beta-alpha) b_alpha")
    direct = series_coefficients(B.inverse(), 4)
    rep.add("invert_series_vs_direct", max(np.abs(b[k].matrix - direct[k].matrix).max() for k in direct),
            1e-6, "Heisenberg-analytic operators are spectrally invariant")
    G = op_weyl(make_symbol("gaussian", g, width=1.0))
    ratios = [remainder_ratio(G, v, 2, 0.1) for v in np.eye(2 * g.d)]
    rep.add("taylor_remainder_ratio_min", min(ratios), (6.0, 10.0), "alpha_z(A) = sum b_beta z^beta")
    rep.add("taylor_remainder_ratio_max", max(ratios), (6.0, 10.0), "alpha_z(A) = sum b_beta z^beta")
    return rep


# ---------------------------------------------------------------------------
# criterion 8: determinism

def _values(rep: NormReport) -> list:
    return [(e["name"], e["value"]) for e in rep.to_dict()["entries"]]


def suite_determinism(cfg: SuiteConfig, pmap=map) -> NormReport:
    """Two runs of the cheap suites, plus a single-threaded run, must agree bitwise."""
    rep = NormReport()
    probe = replace(cfg, N=(3,), suites=("algebra", "finite", "quantize"))
    runs = []
    for mapper in (pmap, pmap, map):
        r = NormReport()
        for name in probe.suites:
            r.extend(SUITE_FUNCS[name](probe, mapper), prefix=f"{name}.")
        runs.append(_values(r))
    rep.add("repeat_runs_identical", int(runs[0] == runs[1]), (1, 1), "plumbing")
    rep.add("single_worker_identical", int(runs[0] == runs[2]), (1, 1), "plumbing")
    return rep


SUITE_FUNCS = {
    "algebra": suite_algebra,
    "fourier": suite_fourier,
    "quantize": suite_quantize,
    "calculus": suite_calculus,
    "stft": suite_stft,
    "cv": suite_cv,
    "finite": suite_finite,
    "analytic": suite_analytic,
    "determinism": suite_determinism,
}
