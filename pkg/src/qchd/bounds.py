"""Error floors for non-adaptive strategies from positive-definite
combinations of Kraus cross products.

If some unit-norm combination P = sum_ij a_ij E_i^dag F_j of the two
channels' Kraus products is positive definite, every parallel strategy on n
uses has error at least lambda_min(P)^(4n) / 4, capping the parallel
symmetric exponent at 4 log2(1 / lambda_min).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels as ch
from .errors import DimensionMismatchError, NotPositiveError, ParameterOutOfRangeError

POSITIVITY_TOL = 1e-9


@dataclass(frozen=True)
class KrausProductSpan:
    """All pairwise products E_i^dag F_j, flattened with j fastest."""

    basis: tuple
    in_dim: int
    shape: tuple  # (#E, #F)

    def __len__(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class Combination:
    """A normalized combination of span elements and its Hermitian-part spectrum."""

    coefficients: np.ndarray
    matrix: np.ndarray
    hermiticity_residual: float
    lambda_min: float

    @property
    def is_positive(self) -> bool:
        return self.lambda_min > POSITIVITY_TOL


def kraus_product_span(m: ch.KrausChannel, mbar: ch.KrausChannel) -> KrausProductSpan:
    if m.in_dim != mbar.in_dim:
        raise DimensionMismatchError("channels must share the input dimension")
    basis = tuple(e.conj().T @ f for e in m.kraus for f in mbar.kraus)
    return KrausProductSpan(basis, m.in_dim, (len(m.kraus), len(mbar.kraus)))


def evaluate_combination(span: KrausProductSpan, coeffs) -> Combination:
    """Assemble P from coefficients (normalized to unit l2 norm) and report the
    smallest eigenvalue of the Hermitian part (P + P^dag)/2.

    A nonpositive result is returned as data, not raised; searches probe many
    combinations and inspect ``is_positive``.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.shape[0] != len(span.basis):
        raise DimensionMismatchError(
            f"{c.shape[0]} coefficients for a span of {len(span.basis)} products"
        )
    norm = np.linalg.norm(c)
    if norm < 1e-15:
        raise ParameterOutOfRangeError("coefficient vector must be nonzero")
    c = c / norm
    p = np.zeros((span.in_dim, span.in_dim), dtype=complex)
    for ck, bk in zip(c, span.basis):
        p += ck * bk
    herm = (p + p.conj().T) / 2.0
    residual = float(np.max(np.abs(p - p.conj().T)))
    lam_min = float(np.linalg.eigvalsh(herm).min())
    return Combination(c, p, residual, lam_min)


def chernoff_upper_bound(comb: Combination) -> float:
    """4 log2(1 / lambda_min): cap on the parallel symmetric exponent."""
    if not comb.is_positive:
        raise NotPositiveError(
            f"lambda_min = {comb.lambda_min:.3e} is not positive beyond {POSITIVITY_TOL:.1e}"
        )
    return float(4.0 * np.log2(1.0 / comb.lambda_min))


def error_lower_bound(comb: Combination, n: int) -> float:
    """Floor lambda_min^(4n) / 4 on the n-use parallel error."""
    if n < 1:
        raise ParameterOutOfRangeError("n must be at least 1")
    if not comb.is_positive:
        raise NotPositiveError(
            f"lambda_min = {comb.lambda_min:.3e} is not positive beyond {POSITIVITY_TOL:.1e}"
        )
    return float(0.25 * comb.lambda_min ** (4 * n))


def harrow_ansatz_coefficients() -> np.ndarray:
    """The hand-built combination for the measure-and-prepare example pair.

    Equalizes the two diagonal blocks of P: weights a on the products
    (1,1) and (2,2), b/sqrt(2) on (5,3) and (3,4), and -2b on (5,5), with
    a = 2 b sin^2(pi/8) and 2 a^2 + 5 b^2 = 1.
    """
    s2 = np.sin(np.pi / 8.0) ** 2
    b = (8.0 * s2 * s2 + 5.0) ** -0.5
    a = 2.0 * b * s2
    c = np.zeros(25)
    c[0 * 5 + 0] = a
    c[1 * 5 + 1] = a
    c[4 * 5 + 2] = b * np.sqrt(0.5)
    c[2 * 5 + 3] = b * np.sqrt(0.5)
    c[4 * 5 + 4] = -2.0 * b
    return c


def harrow_lambda_min_closed_form() -> float:
    return float((2.0 - np.sqrt(2.0)) / (4.0 * np.sqrt(4.0 - np.sqrt(2.0))))


def _subgradient_ascent(
    span: KrausProductSpan,
    c0: np.ndarray,
    iterations: int,
    step0: float,
) -> tuple[np.ndarray, float]:
    """Projected subgradient ascent on lambda_min of the Hermitian part.

    The subgradient at the current combination is the outer product of the
    minimal eigenvector v: d lambda / d c_k = Re(v^dag B_k v) in the real
    part and -Im(...) in the imaginary part, i.e. ascent along conj(g).
    Near-degenerate minimal eigenvalues are handled by averaging the
    subgradients of the clustered eigenvectors.
    """
    basis = np.stack(span.basis)
    c = c0 / np.linalg.norm(c0)
    best_c, best_lam = c.copy(), -np.inf
    for t in range(iterations):
        p = np.tensordot(c, basis, axes=1)
        herm = (p + p.conj().T) / 2.0
        w, v = np.linalg.eigh(herm)
        if w[0] > best_lam:
            best_lam, best_c = float(w[0]), c.copy()
        cluster = w <= w[0] + max(1e-4 * (1.0 - t / iterations), 1e-9)
        vecs = v[:, cluster]
        g = np.einsum("am,kab,bm->k", vecs.conj(), basis, vecs) / vecs.shape[1]
        step = step0 / np.sqrt(1.0 + t)
        c = c + step * g.conj()
        c = c / np.linalg.norm(c)
    return best_c, best_lam


def search_positive_combination(
    span: KrausProductSpan,
    restarts: int = 64,
    iterations: int = 300,
    seed: int = 0,
    step0: float = 0.2,
) -> Combination | None:
    """Maximize lambda_min over unit-norm coefficient vectors by projected
    subgradient ascent with seeded random restarts (half real, half complex).

    Returns the best combination found, or None when nothing exceeds the
    positivity threshold.
    """
    rng = np.random.default_rng(seed)
    m = len(span.basis)
    best: tuple[np.ndarray, float] | None = None
    for k in range(restarts):
        if k % 2 == 0:
            c0 = rng.standard_normal(m).astype(complex)
        else:
            c0 = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        c, lam = _subgradient_ascent(span, c0, iterations, step0)
        if best is None or lam > best[1]:
            best = (c, lam)
    comb = evaluate_combination(span, best[0])
    return comb if comb.is_positive else None
