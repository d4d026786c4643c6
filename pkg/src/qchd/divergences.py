"""Quantum relative entropy, Renyi relative entropy of order alpha in (0, 1),
and the eigensystem-overlap reduction mapping a state pair to a pair of
classical joint distributions with the same Renyi divergences.

All logarithms are base 2. Infinite divergences are returned as math.inf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import AlphaOutOfRangeError, DimensionMismatchError

# Mass tolerated outside the second argument's support before declaring
# the divergence infinite.
SUPPORT_TOL = 1e-9


def _check_pair(rho: np.ndarray, sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionMismatchError(f"state shapes differ: {rho.shape} vs {sigma.shape}")
    return rho, sigma


def _check_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRangeError(f"alpha {alpha} outside the open interval (0, 1)")
    return float(alpha)


@dataclass(frozen=True)
class SpectralPair:
    """Eigenvalues of two states and the squared overlaps of their eigenbases.

    ``overlap[i, j] = |<u_i|v_j>|^2`` with (lam, u) from the first state and
    (mu, v) from the second. Everything downstream (Renyi trace functional,
    relative entropy, support projector) is a cheap function of this data.
    """

    lam: np.ndarray
    mu: np.ndarray
    overlap: np.ndarray

    @classmethod
    def from_states(cls, rho: np.ndarray, sigma: np.ndarray) -> "SpectralPair":
        rho, sigma = _check_pair(rho, sigma)
        lam, u = linalg.hermitian_eig(rho, tol=1e-10)
        mu, v = linalg.hermitian_eig(sigma, tol=1e-10)
        overlap = np.abs(u.conj().T @ v) ** 2
        return cls(np.clip(lam, 0.0, None), np.clip(mu, 0.0, None), overlap)

    def trace_functional(self, alpha: float) -> float:
        """Tr rho^alpha sigma^(1-alpha) with the 0^x := 0 convention."""
        la = np.where(self.lam > linalg.EIG_CLIP, self.lam, 0.0) ** alpha
        mb = np.where(self.mu > linalg.EIG_CLIP, self.mu, 0.0) ** (1.0 - alpha)
        return float(la @ self.overlap @ mb)

    def renyi(self, alpha: float) -> float:
        f = self.trace_functional(alpha)
        if f <= 0.0:
            return np.inf
        return np.log2(f) / (alpha - 1.0)

    def relative_entropy(self) -> float:
        lam = np.where(self.lam > linalg.EIG_CLIP, self.lam, 0.0)
        mu = np.where(self.mu > linalg.EIG_CLIP, self.mu, 0.0)
        pos = lam > 0.0
        term1 = float(np.sum(lam[pos] * np.log2(lam[pos])))
        sup = mu > 0.0
        leak = float(lam @ self.overlap[:, ~sup].sum(axis=1)) if (~sup).any() else 0.0
        if leak > SUPPORT_TOL:
            return np.inf
        term2 = float(lam @ self.overlap[:, sup] @ np.log2(mu[sup]))
        return term1 - term2

    def zero_order(self) -> float:
        """-log2 Tr Pi_rho sigma, the alpha -> 0 limit."""
        pos = self.lam > linalg.EIG_CLIP
        mass = float(np.sum(self.overlap[pos] @ self.mu)) if pos.any() else 0.0
        if mass <= 0.0:
            return np.inf
        return -np.log2(min(mass, 1.0))


def renyi_divergence(rho: np.ndarray, sigma: np.ndarray, alpha: float) -> float:
    """D_alpha(rho||sigma) = log2(Tr rho^alpha sigma^(1-alpha)) / (alpha - 1).

    Requires 0 < alpha < 1; returns inf exactly when the trace functional
    vanishes (orthogonal supports).
    """
    alpha = _check_alpha(alpha)
    return SpectralPair.from_states(rho, sigma).renyi(alpha)


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """D(rho||sigma) = Tr rho (log2 rho - log2 sigma).

    Finite iff supp(rho) is contained in supp(sigma); computed in eigenbases
    with the 0 log 0 = 0 convention.
    """
    return SpectralPair.from_states(rho, sigma).relative_entropy()


def zero_renyi_divergence(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Order-0 divergence -log2 Tr Pi_rho sigma (support projector of rho)."""
    return SpectralPair.from_states(rho, sigma).zero_order()


def nussbaum_szkola(rho: np.ndarray, sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Classical joint distributions preserving every D_alpha, alpha in (0, 1).

    With eigensystems rho = sum_i lam_i |u_i><u_i| and
    sigma = sum_j mu_j |v_j><v_j|, returns the matrices
    G[i, j] = lam_i |<v_j|u_i>|^2 and Gbar[i, j] = mu_j |<v_j|u_i>|^2.
    Both marginalize to probability one.
    """
    sp = SpectralPair.from_states(rho, sigma)
    gamma = sp.lam[:, None] * sp.overlap
    gamma_bar = sp.mu[None, :] * sp.overlap
    return gamma, gamma_bar


def classical_renyi(gamma: np.ndarray, gamma_bar: np.ndarray, alpha: float) -> float:
    """Renyi divergence of two discrete distributions over a common index set."""
    alpha = _check_alpha(alpha)
    g = np.asarray(gamma, dtype=float).ravel()
    gb = np.asarray(gamma_bar, dtype=float).ravel()
    if g.shape != gb.shape:
        raise DimensionMismatchError("distributions must share an index set")
    mask = g > 0.0
    f = float(np.sum(g[mask] ** alpha * gb[mask] ** (1.0 - alpha)))
    if f <= 0.0:
        return np.inf
    return np.log2(f) / (alpha - 1.0)


def classical_relative_entropy(gamma: np.ndarray, gamma_bar: np.ndarray) -> float:
    g = np.asarray(gamma, dtype=float).ravel()
    gb = np.asarray(gamma_bar, dtype=float).ravel()
    if g.shape != gb.shape:
        raise DimensionMismatchError("distributions must share an index set")
    pos = g > 0.0
    if float(np.sum(g[pos & (gb <= 0.0)])) > SUPPORT_TOL:
        return np.inf
    mask = pos & (gb > 0.0)
    return float(np.sum(g[mask] * (np.log2(g[mask]) - np.log2(gb[mask]))))


def batched_trace_functional(
    lam: np.ndarray, mu: np.ndarray, overlap: np.ndarray, alpha: float
) -> np.ndarray:
    """Tr rho^alpha sigma^(1-alpha) over a leading batch of spectral pairs.

    ``lam``/``mu`` have shape (..., d) and ``overlap`` shape (..., d, d);
    used by the grid searches to evaluate many candidate inputs at once.
    """
    la = np.where(lam > linalg.EIG_CLIP, lam, 0.0) ** alpha
    mb = np.where(mu > linalg.EIG_CLIP, mu, 0.0) ** (1.0 - alpha)
    return np.einsum("...i,...ij,...j->...", la, overlap, mb)


def batched_renyi(
    lam: np.ndarray, mu: np.ndarray, overlap: np.ndarray, alpha: float
) -> np.ndarray:
    f = batched_trace_functional(lam, mu, overlap, alpha)
    with np.errstate(divide="ignore"):
        return np.where(f > 0.0, np.log2(np.maximum(f, 1e-300)), -np.inf) / (alpha - 1.0)


def batched_relative_entropy(
    lam: np.ndarray, mu: np.ndarray, overlap: np.ndarray
) -> np.ndarray:
    """Relative entropy over a leading batch of spectral pairs; inf where the
    first state carries mass outside the second's support."""
    lam = np.where(lam > linalg.EIG_CLIP, lam, 0.0)
    mu = np.where(mu > linalg.EIG_CLIP, mu, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        self_term = np.sum(np.where(lam > 0.0, lam * np.log2(np.maximum(lam, 1e-300)), 0.0), axis=-1)
        log_mu = np.where(mu > 0.0, np.log2(np.maximum(mu, 1e-300)), 0.0)
    outside = (mu <= 0.0).astype(float)
    leak = np.einsum("...a,...ab,...b->...", lam, overlap, outside)
    cross = np.einsum("...a,...ab,...b->...", lam, overlap, log_mu)
    return np.where(leak > SUPPORT_TOL, np.inf, self_term - cross)


def batched_zero_order(lam: np.ndarray, mu: np.ndarray, overlap: np.ndarray) -> np.ndarray:
    """-log2 Tr Pi_rho sigma over a leading batch of spectral pairs."""
    proj = (lam > linalg.EIG_CLIP).astype(float)
    mass = np.einsum("...a,...ab,...b->...", proj, overlap, mu)
    with np.errstate(divide="ignore"):
        return np.where(mass > 0.0, -np.log2(np.clip(mass, 1e-300, 1.0)), np.inf)
