"""Exact quantum harmonic analysis on ``G = Z_N`` with ``Phi(t) = c t``.

Every phase is ``omega^k`` with ``omega = exp(2 pi i / N)`` and the integer
``k`` reduced mod ``N`` before exponentiation, so Weyl matrices are exact
permutation matrices times tabulated roots of unity.  Transforms use the
measure ``1/N`` on phase space, which makes ``F_sigma`` self-inverse and
``op^Phi(1) = I``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .report import NormReport

TOL = 1e-12


@dataclass(frozen=True)
class FiniteGroup:
    N: int

    def __post_init__(self):
        if self.N < 3:
            raise ValueError(f"N must be >= 3, got {self.N}")
        if self.N % 2 == 0:
            raise ValueError(f"N must be odd (2 must be invertible mod N), got {self.N}")

    @property
    def roots(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.N) / self.N)

    def omega(self, k) -> np.ndarray:
        return self.roots[np.mod(k, self.N)]

    @property
    def half(self) -> int:
        """``2^-1 mod N``."""
        return pow(2, -1, self.N)


@dataclass(frozen=True)
class HomZN:
    c: int
    N: int

    def __post_init__(self):
        if not 0 <= self.c < self.N:
            raise ValueError(f"multiplier c must lie in [0, {self.N}), got {self.c}")

    def complement(self) -> "HomZN":
        """``I - Phi``."""
        return HomZN((1 - self.c) % self.N, self.N)


def weyl_finite(a: int, b: int, phi: HomZN) -> np.ndarray:
    """``W^Phi_(a,b) f(t) = omega^{-b c a + b t} f(t - a)``."""
    G = FiniteGroup(phi.N)
    N = G.N
    t = np.arange(N)
    M = np.zeros((N, N), dtype=complex)
    M[t, (t - a) % N] = G.omega(-b * phi.c * a + b * t)
    return M


def all_weyl(phi: HomZN) -> np.ndarray:
    """``W[a, b]`` for every phase-space point, shape ``(N, N, N, N)``."""
    N = phi.N
    return np.array([[weyl_finite(a, b, phi) for b in range(N)] for a in range(N)])


def multiplier(z, w, phi: HomZN) -> complex:
    """``m_Phi(z, w)`` with ``W_z W_w = m_Phi(z, w) W_(z+w)``."""
    (a, b), (a2, b2) = z, w
    return complex(FiniteGroup(phi.N).omega(phi.c * (b * a2 + b2 * a) - b2 * a))


def sigma_finite(z, w, N: int) -> complex:
    """``m_Phi(z, w) / m_Phi(w, z) = omega^{a' b - a b'}``."""
    (a, b), (a2, b2) = z, w
    return complex(FiniteGroup(N).omega(a2 * b - a * b2))


def _sigma_table(N: int) -> np.ndarray:
    a = np.arange(N)
    # S[a, b, a', b'] = omega^{a' b - a b'}
    k = a[None, None, :, None] * a[None, :, None, None] - a[:, None, None, None] * a[None, None, None, :]
    return FiniteGroup(N).omega(k)


def fourier_sigma_finite(f: np.ndarray) -> np.ndarray:
    """``F_sigma f(w) = N^-1 sum_z f(z) sigma(z, w)``."""
    N = f.shape[0]
    return np.einsum("ab,abcd->cd", f, _sigma_table(N)) / N


def fw_finite(A: np.ndarray, phi: HomZN, W=None) -> np.ndarray:
    """``F_W^Phi(A)(w) = tr(A W_w^*)`` for all ``w``."""
    W = all_weyl(phi) if W is None else W
    return np.einsum("ij,abij->ab", A, W.conj())


def fw_inverse_finite(f: np.ndarray, phi: HomZN, W=None) -> np.ndarray:
    W = all_weyl(phi) if W is None else W
    return np.einsum("ab,abij->ij", f, W) / phi.N


def op_phi_finite(f: np.ndarray, phi: HomZN, W=None) -> np.ndarray:
    """``op^Phi = (F_W^Phi)^-1 F_sigma``."""
    return fw_inverse_finite(fourier_sigma_finite(f), phi, W)


def symbol_phi_finite(A: np.ndarray, phi: HomZN, W=None) -> np.ndarray:
    return fourier_sigma_finite(fw_finite(A, phi, W))


def change_of_quantization(f: np.ndarray, phi: HomZN, phi2: HomZN) -> np.ndarray:
    """``F_sigma F_W^{Phi'} (F_W^Phi)^-1 F_sigma``: Phi-symbol to Phi'-symbol."""
    return symbol_phi_finite(op_phi_finite(f, phi), phi2)


def parity(N: int) -> np.ndarray:
    t = np.arange(N)
    U = np.zeros((N, N))
    U[t, (-t) % N] = 1.0
    return U


def shift_op(A: np.ndarray, a: int, b: int, phi: HomZN) -> np.ndarray:
    W = weyl_finite(a, b, phi)
    return W @ A @ W.conj().T


def modulate_op(A: np.ndarray, a: int, b: int, phi: HomZN) -> np.ndarray:
    """One-sided modulation ``gamma^Phi_z(A) = W^Phi_z A``."""
    return weyl_finite(a, b, phi) @ A


def shift_fn(f: np.ndarray, a: int, b: int) -> np.ndarray:
    return np.roll(f, (a, b), axis=(0, 1))


def conv_fn_op_finite(f: np.ndarray, A: np.ndarray, phi: HomZN) -> np.ndarray:
    """``f * A = N^-1 sum_z f(z) alpha_z(A)``."""
    N = phi.N
    out = np.zeros((N, N), dtype=complex)
    for a in range(N):
        for b in range(N):
            if f[a, b] != 0:
                out += f[a, b] * shift_op(A, a, b, phi)
    return out / N


def conv_op_op_finite(A: np.ndarray, B: np.ndarray, phi: HomZN) -> np.ndarray:
    """``A * B (z) = tr(A alpha_z(U B U))``."""
    N = phi.N
    U = parity(N)
    C = U @ B @ U
    return np.array([[np.trace(A @ shift_op(C, a, b, phi)) for b in range(N)] for a in range(N)])


def difference_op(A: np.ndarray, j: int, phi: HomZN) -> np.ndarray:
    """``alpha_(e_j)(A) - A``."""
    a, b = (1, 0) if j == 0 else (0, 1)
    return shift_op(A, a, b, phi) - A


def difference_fn(f: np.ndarray, j: int) -> np.ndarray:
    a, b = (1, 0) if j == 0 else (0, 1)
    return shift_fn(f, a, b) - f


# ---------------------------------------------------------------------------

def _rand_matrix(rng, N):
    return rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))


def exhaustive_verify(N: int, seed: int = 0, samples: int = 50, tol: float = TOL) -> NormReport:
    """Every finite-group identity by full enumeration for all ``N`` multipliers ``c``."""
    if not 3 <= N <= 13:
        raise ValueError(f"N must satisfy 3 <= N <= 13, got {N}")
    G = FiniteGroup(N)  # rejects even N
    rng = np.random.default_rng(seed)
    rep = NormReport(metadata={"N": N})
    pts = [(a, b) for a in range(N) for b in range(N)]
    worst = {k: 0.0 for k in ("ccr", "adjoint", "fw_relation", "bijectivity", "covariance",
                               "conv_fn_op", "conv_op_op", "sigma_independence",
                               "change_of_quantization", "difference", "op_identity",
                               "modulation")}
    plancherel_consts = []
    rank_min = N * N
    conv_factor_exact = 0.0
    W0 = all_weyl(HomZN(0, N))
    sigma_ref = np.array([[[[sigma_finite(z, w, N) for w in pts]] for z in pts]]).reshape(N * N, N * N)
    for c in range(N):
        phi = HomZN(c, N)
        W = all_weyl(phi)
        Wc = all_weyl(phi.complement())
        # CCR multiplier table and substitute symplectic form
        sig = np.empty((N * N, N * N), dtype=complex)
        for i, z in enumerate(pts):
            for k, w in enumerate(pts):
                s = ((z[0] + w[0]) % N, (z[1] + w[1]) % N)
                m = multiplier(z, w, phi)
                worst["ccr"] = max(worst["ccr"], np.abs(W[z] @ W[w] - m * W[s]).max())
                sig[i, k] = m / multiplier(w, z, phi)
        worst["sigma_independence"] = max(worst["sigma_independence"], np.abs(sig - sigma_ref).max())
        # adjoint relation
        for z in pts:
            mz = ((-z[0]) % N, (-z[1]) % N)
            worst["adjoint"] = max(worst["adjoint"], np.abs(W[z].conj().T - Wc[mz]).max())
        # Phi vs 0 transforms, Plancherel
        x, xi = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
        for _ in range(samples // N + 1):
            A = _rand_matrix(rng, N)
            F = fw_finite(A, phi, W)
            F0 = fw_finite(A, HomZN(0, N), W0)
            worst["fw_relation"] = max(worst["fw_relation"], np.abs(F - G.omega(xi * c * x) * F0).max())
            plancherel_consts.append(np.sum(np.abs(F) ** 2) / np.sum(np.abs(A) ** 2))
        # bijectivity on the basis of delta symbols
        basis_ops = []
        for z in pts:
            e = np.zeros((N, N))
            e[z] = 1.0
            Ae = op_phi_finite(e, phi, W)
            basis_ops.append(Ae.ravel())
            worst["bijectivity"] = max(worst["bijectivity"], np.abs(symbol_phi_finite(Ae, phi, W) - e).max())
        rank_min = min(rank_min, np.linalg.matrix_rank(np.array(basis_ops)))
        worst["op_identity"] = max(worst["op_identity"],
                                   np.abs(op_phi_finite(np.ones((N, N)), phi, W) - np.eye(N)).max())
        # covariance, one-sided modulation, difference operators
        f = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
        Af = op_phi_finite(f, phi, W)
        Ff = fw_finite(Af, phi, W)
        for z in pts:
            worst["covariance"] = max(worst["covariance"], np.abs(
                shift_op(Af, *z, phi) - op_phi_finite(shift_fn(f, *z), phi, W)).max())
            # F_W(W_z A)(w) = m(z, w - z)^* ... checked in modulus: |F_W(gamma_z A)| = |alpha_z F_W A|
            worst["modulation"] = max(worst["modulation"], np.abs(
                np.abs(fw_finite(modulate_op(Af, *z, phi), phi, W)) - np.abs(shift_fn(Ff, *z))).max())
        for j in (0, 1):
            worst["difference"] = max(worst["difference"], np.abs(
                difference_op(Af, j, phi) - op_phi_finite(difference_fn(f, j), phi, W)).max())
        # convolution theorems
        A, B = _rand_matrix(rng, N), _rand_matrix(rng, N)
        FA, FB = fw_finite(A, phi, W), fw_finite(B, phi, W)
        worst["conv_fn_op"] = max(worst["conv_fn_op"], np.abs(
            fw_finite(conv_fn_op_finite(f, A, phi), phi, W) - fourier_sigma_finite(f) * FA).max())
        mult = G.omega(x * xi * (1 - 2 * c))  # m_Phi(w, -w)
        lhs = fourier_sigma_finite(conv_op_op_finite(A, B, phi))
        worst["conv_op_op"] = max(worst["conv_op_op"], np.abs(lhs - mult * FA * FB).max())
        if c == G.half:
            conv_factor_exact = np.abs(lhs - FA * FB).max()
        # change of quantization to every other Phi'
        for c2 in range(N):
            phi2 = HomZN(c2, N)
            S = np.array([change_of_quantization(np.eye(N * N)[k].reshape(N, N), phi, phi2).ravel()
                          for k in range(N * N)])
            g2 = change_of_quantization(f, phi, phi2)
            worst["change_of_quantization"] = max(worst["change_of_quantization"], np.abs(
                op_phi_finite(g2, phi2) - Af).max())
            rank_min = min(rank_min, np.linalg.matrix_rank(S))
    anchors = {
        "ccr": "multiplier m_Phi of the representation W^Phi",
        "adjoint": "(W^Phi_(x,xi))* = W^{I-Phi}_(-x,-xi)",
        "fw_relation": "F_W^Phi(A)(x,xi) = <xi, Phi(x)> F_W^0(A)(x,xi)",
        "bijectivity": "op^Phi = (F_W^Phi)^-1 o F_sigma",
        "covariance": "alpha_z(op^Phi(f)) = op^Phi(alpha_z(f))",
        "modulation": "gamma^Phi_z(A) = W^Phi_z A",
        "conv_fn_op": "F_W(f * A) = F_sigma(f) F_W(A)",
        "conv_op_op": "F_sigma(A * B) = F_W(A) F_W(B)",
        "sigma_independence": "sigma(z, w) = m_Phi(z, w) / m_Phi(w, z)",
        "change_of_quantization": "maps a Phi-symbol to the corresponding Phi'-symbol",
        "difference": "shift-by-one differences commute with quantization",
        "op_identity": "op^Phi(1) = I",
    }
    for k, v in worst.items():
        rep.add(k, v, tol, anchors[k])
    pc = np.array(plancherel_consts)
    rep.add("plancherel_constant", float(pc.mean()), None, "F_W^Phi unitary up to one constant")
    rep.add("plancherel_constant_defect", float(np.abs(pc - N).max()), tol,
            "F_W^Phi unitary up to one constant")
    rep.add("plancherel_variance", float(pc.var()), 1e-20, "F_W^Phi unitary up to one constant")
    rep.add("conv_op_op_symmetric_phi_exact", conv_factor_exact, tol,
            "F_sigma(A * B) = F_W(A) F_W(B)")
    rep.add("min_rank", rank_min, (N * N, N * N), "op^Phi bijective")
    return rep
