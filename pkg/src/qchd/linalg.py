"""Dense complex linear algebra kernel for small matrices.

Everything operates on plain numpy arrays (complex128, row-major). States are
density matrices: positive semidefinite, unit trace. All functions are pure.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError

HERMITICITY_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10

# Eigenvalues below this are treated as exact zeros in spectral functions
# (0**alpha := 0, 0*log 0 := 0); keeps rank-deficient states NaN-free.
EIG_CLIP = 1e-14


class EigenDecomposition(NamedTuple):
    """Spectral data of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, orthonormal


def hermiticity_residual(a: np.ndarray) -> float:
    """Largest entrywise deviation of A from its conjugate transpose."""
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def check_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    res = hermiticity_residual(a)
    if res > tol:
        raise NonHermitianError(f"Hermiticity residual {res:.3e} exceeds {tol:.1e}")
    return a


def check_density_matrix(rho: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Validate PSD and unit trace (within tolerance); returns the input array."""
    rho = check_hermitian(rho, tol=1e-10)
    w = np.linalg.eigvalsh(rho)
    if w.min() < -tol:
        raise NonHermitianError(f"negative eigenvalue {w.min():.3e} below -{tol:.1e}")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise DimensionMismatchError(f"trace {tr} deviates from 1 beyond {TRACE_TOL:.1e}")
    return rho


def hermitian_eig(h: np.ndarray, tol: float = HERMITICITY_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises NonHermitianError if the input violates the Hermiticity tolerance.
    """
    h = check_hermitian(h, tol=tol)
    w, v = np.linalg.eigh(h)
    return EigenDecomposition(w, v)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.asarray(mats[0])
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep``.

    ``dims`` are the subsystem dimensions in tensor order; their product must
    equal the matrix dimension. Kept subsystems retain their original order.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = list(dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionMismatchError(
            f"matrix of shape {rho.shape} does not match subsystem dims {dims}"
        )
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatchError(f"keep indices {keep} out of range for {len(dims)} systems")
    traced = [i for i in range(len(dims)) if i not in keep]
    tensor = rho.reshape(dims + dims)
    for offset, idx in enumerate(sorted(traced, reverse=True)):
        n_sys = len(dims) - offset
        tensor = np.trace(tensor, axis1=idx, axis2=idx + n_sys)
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return tensor.reshape(kept_dim, kept_dim)


def trace_norm(a: np.ndarray) -> float:
    """Sum of singular values, ||A||_1."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if hermiticity_residual(a) <= 1e-12:
        return float(np.sum(np.abs(np.linalg.eigvalsh(a))))
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def matrix_sqrt(rho: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix, eigenvalues clipped at 0."""
    w, v = hermitian_eig(rho, tol=1e-10)
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ v.conj().T


def matrix_power_psd(rho: np.ndarray, p: float) -> np.ndarray:
    """rho**p for PSD rho via eigendecomposition with 0**p := 0."""
    w, v = hermitian_eig(rho, tol=1e-10)
    w = np.clip(w, 0.0, None)
    wp = np.where(w > EIG_CLIP, w, 0.0) ** p
    return (v * wp) @ v.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Fidelity F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1, in [0, 1]."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatchError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    f = trace_norm(matrix_sqrt(rho) @ matrix_sqrt(sigma))
    return float(min(f, 1.0))


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def ketbra(u: np.ndarray, v: np.ndarray | None = None) -> np.ndarray:
    """|u><v| (|u><u| when v is omitted)."""
    u = np.asarray(u, dtype=complex)
    v = u if v is None else np.asarray(v, dtype=complex)
    return np.outer(u, v.conj())


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random state vector via normalized complex Gaussians."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random full-rank (or given-rank) density matrix from a Wishart draw."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
