"""Quantum channels in Kraus form, classical-quantum channels, and qubit
Bloch-affine geometry, plus the named example channels used throughout.

Conventions: a channel maps density matrices on a ``in_dim``-dimensional
system to ``out_dim``; Kraus operators are ``out_dim x in_dim``. Two-qubit
inputs of the measure-and-prepare example pair are ordered data-qubit (x)
control-qubit, matching the Kraus labels |ac>.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    FormatError,
    ParameterOutOfRangeError,
)

KRAUS_TOL = 1e-10
CHOI_TOL = 1e-9
TENSOR_DIM_CAP = 64

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

KET0 = linalg.ket(0, 2)
KET1 = linalg.ket(1, 2)
KET_PLUS = (KET0 + KET1) / np.sqrt(2)
KET_MINUS = (KET0 - KET1) / np.sqrt(2)


def completeness_residual(kraus: Sequence[np.ndarray], in_dim: int) -> float:
    """Largest entrywise deviation of sum_i E_i^dag E_i from the identity."""
    acc = np.zeros((in_dim, in_dim), dtype=complex)
    for e in kraus:
        acc += e.conj().T @ e
    return float(np.max(np.abs(acc - np.eye(in_dim))))


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    in_dim: int
    out_dim: int
    kraus: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(e, dtype=complex) for e in self.kraus)
        for e in ops:
            if e.shape != (self.out_dim, self.in_dim):
                raise DimensionMismatchError(
                    f"Kraus operator of shape {e.shape}, expected "
                    f"({self.out_dim}, {self.in_dim})"
                )
        res = completeness_residual(ops, self.in_dim)
        if res > KRAUS_TOL:
            raise FormatError(
                f"kraus completeness violated: residual {res:.3e} exceeds {KRAUS_TOL:.1e}"
            )
        object.__setattr__(self, "kraus", ops)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return apply(self, rho)


def from_kraus(kraus: Sequence[np.ndarray]) -> KrausChannel:
    ops = [np.asarray(e, dtype=complex) for e in kraus]
    out_dim, in_dim = ops[0].shape
    return KrausChannel(in_dim, out_dim, tuple(ops))


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel(dim, dim, (np.eye(dim, dtype=complex),))


def apply(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Kraus action sum_i E_i rho E_i^dag."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.in_dim, ch.in_dim):
        raise DimensionMismatchError(
            f"state of shape {rho.shape} incompatible with in_dim {ch.in_dim}"
        )
    out = np.zeros((ch.out_dim, ch.out_dim), dtype=complex)
    for e in ch.kraus:
        out += e @ rho @ e.conj().T
    return out


def apply_to_vector(ch: KrausChannel, psi: np.ndarray, ref_dim: int = 1) -> np.ndarray:
    """(id_R (x) ch) applied to a pure state |psi> on R (x) A, returned as a matrix.

    Works columnwise on the reshaped vector, avoiding the (ref*in)^2 density
    matrix; the output is the (ref*out)-dimensional density matrix.
    """
    psi = np.asarray(psi, dtype=complex).reshape(ref_dim, ch.in_dim)
    branches = np.stack([psi @ e.T for e in ch.kraus])  # (k, ref, out)
    branches = branches.reshape(len(ch.kraus), ref_dim * ch.out_dim)
    return branches.T @ branches.conj()


def apply_extended(ch: KrausChannel, rho: np.ndarray, ref_dim: int) -> np.ndarray:
    """(id_R (x) ch) rho for rho on R (x) A; the channel acts on the second factor."""
    rho = np.asarray(rho, dtype=complex)
    d = ref_dim * ch.in_dim
    if rho.shape != (d, d):
        raise DimensionMismatchError(
            f"state of shape {rho.shape} incompatible with ref_dim*in_dim = {d}"
        )
    eye = np.eye(ref_dim)
    out = np.zeros((ref_dim * ch.out_dim,) * 2, dtype=complex)
    for e in ch.kraus:
        ext = np.kron(eye, e)
        out += ext @ rho @ ext.conj().T
    return out


def tensor_power(ch: KrausChannel, n: int, dim_cap: int = TENSOR_DIM_CAP) -> KrausChannel:
    """n-fold tensor power; Kraus set is all n-fold products of the factors."""
    if n < 1:
        raise ParameterOutOfRangeError("tensor power requires n >= 1")
    if max(ch.in_dim**n, ch.out_dim**n) > dim_cap:
        raise BudgetExceededError(
            f"tensor power dimension {max(ch.in_dim**n, ch.out_dim**n)} exceeds cap {dim_cap}"
        )
    ops = [np.eye(1, dtype=complex)]
    for _ in range(n):
        ops = [np.kron(a, e) for a in ops for e in ch.kraus]
    return KrausChannel(ch.in_dim**n, ch.out_dim**n, tuple(ops))


def mix(ch_a: KrausChannel, ch_b: KrausChannel, eps: float) -> KrausChannel:
    """Convex mixture (1-eps) ch_a + eps ch_b."""
    if not 0.0 <= eps <= 1.0:
        raise ParameterOutOfRangeError("mixing weight must lie in [0, 1]")
    if (ch_a.in_dim, ch_a.out_dim) != (ch_b.in_dim, ch_b.out_dim):
        raise DimensionMismatchError("mixed channels must share input and output dims")
    kraus = [np.sqrt(1 - eps) * e for e in ch_a.kraus] + [np.sqrt(eps) * e for e in ch_b.kraus]
    return KrausChannel(ch_a.in_dim, ch_a.out_dim, tuple(kraus))


def completely_depolarizing(in_dim: int, out_dim: int) -> KrausChannel:
    """Channel discarding its input and outputting the maximally mixed state."""
    kraus = [
        np.outer(linalg.ket(b, out_dim), linalg.ket(a, in_dim)) / np.sqrt(out_dim)
        for a in range(in_dim)
        for b in range(out_dim)
    ]
    return KrausChannel(in_dim, out_dim, tuple(kraus))


def choi_matrix(ch: KrausChannel) -> np.ndarray:
    """Unnormalized Choi matrix sum_ij |i><j| (x) ch(|i><j|)."""
    d = ch.in_dim
    j = np.zeros((d * ch.out_dim,) * 2, dtype=complex)
    for e in ch.kraus:
        v = e.T.reshape(-1)  # (id (x) E) applied to the unnormalized cup state
        j += np.outer(v, v.conj())
    return j


def choi_is_ppt(ch: KrausChannel, tol: float = CHOI_TOL) -> bool:
    """Partial transpose of the Choi matrix over the input factor is PSD."""
    j = choi_matrix(ch).reshape(ch.in_dim, ch.out_dim, ch.in_dim, ch.out_dim)
    jt = j.transpose(2, 1, 0, 3).reshape(ch.in_dim * ch.out_dim, -1)
    return float(np.linalg.eigvalsh(jt).min()) >= -tol


# --- named qubit channels -------------------------------------------------


def depolarizing(q: float) -> KrausChannel:
    """rho -> (1-q) rho + q I/2."""
    if not 0.0 <= q <= 1.0:
        raise ParameterOutOfRangeError(f"depolarizing parameter {q} outside [0, 1]")
    return pauli((1 - 3 * q / 4, q / 4, q / 4, q / 4))


def pauli(p: Sequence[float]) -> KrausChannel:
    """Pauli channel with probabilities (p_I, p_x, p_y, p_z)."""
    p = np.asarray(p, dtype=float)
    if p.shape != (4,) or p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-10:
        raise ParameterOutOfRangeError("pauli weights must be a probability 4-vector")
    p = np.clip(p, 0.0, None)
    ops = [np.sqrt(p[0]) * np.eye(2, dtype=complex)]
    ops += [np.sqrt(pi) * s for pi, s in zip(p[1:], PAULIS)]
    return KrausChannel(2, 2, tuple(ops))


def amplitude_damping(gamma: float) -> KrausChannel:
    """Decay toward |0> with probability gamma."""
    if not 0.0 <= gamma <= 1.0:
        raise ParameterOutOfRangeError(f"damping parameter {gamma} outside [0, 1]")
    a0 = np.sqrt(gamma) * linalg.ketbra(KET0, KET1)
    a1 = linalg.ketbra(KET0) + np.sqrt(1 - gamma) * linalg.ketbra(KET1)
    return KrausChannel(2, 2, (a0, a1))


def harrow_channels() -> tuple[KrausChannel, KrausChannel]:
    """The two-qubit-to-qubit measure-and-prepare pair with a perfect two-copy
    feed-forward discriminator but strictly positive parallel error at every n.

    Both channels read the control qubit (second factor) in the computational
    basis; on outcome 0 they prepare fixed, different pure states; on outcome 1
    they measure the data qubit (first factor), in the computational basis for
    the first channel and the Hadamard basis for the second.
    """
    b00 = np.kron(KET0, KET0)
    b01 = np.kron(KET0, KET1)
    b10 = np.kron(KET1, KET0)
    b11 = np.kron(KET1, KET1)
    bp1 = np.kron(KET_PLUS, KET1)
    bm1 = np.kron(KET_MINUS, KET1)
    e = (
        linalg.ketbra(KET0, b00),
        linalg.ketbra(KET0, b10),
        linalg.ketbra(KET0, b01),
        linalg.ketbra(KET0, b11) / np.sqrt(2),
        linalg.ketbra(KET1, b11) / np.sqrt(2),
    )
    f = (
        linalg.ketbra(KET_PLUS, b00),
        linalg.ketbra(KET_PLUS, b10),
        linalg.ketbra(KET1, bp1),
        linalg.ketbra(KET0, bm1) / np.sqrt(2),
        linalg.ketbra(KET1, bm1) / np.sqrt(2),
    )
    return from_kraus(e), from_kraus(f)


# --- Bloch-affine geometry --------------------------------------------------


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """Bloch coordinates of a qubit state."""
    rho = np.asarray(rho, dtype=complex)
    return np.array([np.trace(s @ rho).real for s in PAULIS])


def state_from_bloch(r: Sequence[float]) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    rho = 0.5 * np.eye(2, dtype=complex)
    for ri, s in zip(r, PAULIS):
        rho += 0.5 * ri * s
    return rho


def pure_state_from_angles(theta: float, phi: float) -> np.ndarray:
    """Pure qubit state vector at Bloch angles (theta, phi)."""
    return np.array(
        [np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], dtype=complex
    )


@dataclass(frozen=True)
class BlochAffine:
    """Qubit channel as the affine Bloch-ball map r -> t + T r."""

    t: np.ndarray
    T: np.ndarray

    def apply_bloch(self, r: Sequence[float]) -> np.ndarray:
        return self.t + self.T @ np.asarray(r, dtype=float)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return state_from_bloch(self.apply_bloch(bloch_vector(rho)))

    def choi_min_eigenvalue(self) -> float:
        """Smallest Choi eigenvalue of the induced map; >= -1e-9 iff CP."""
        basis = [linalg.ketbra(linalg.ket(i, 2), linalg.ket(j, 2)) for i in range(2) for j in range(2)]
        j = np.zeros((4, 4), dtype=complex)
        for idx, bij in enumerate(basis):
            i, jj = divmod(idx, 2)
            # linear extension of the affine state map to arbitrary 2x2 inputs
            tr = np.trace(bij)
            pauli_part = np.array([np.trace(s @ bij) for s in PAULIS])
            out_vec = self.T @ pauli_part
            img = 0.5 * tr * np.eye(2, dtype=complex)
            img += 0.5 * tr * sum(ti * s for ti, s in zip(self.t, PAULIS))
            img += 0.5 * sum(oi * s for oi, s in zip(out_vec, PAULIS))
            j += np.kron(linalg.ketbra(linalg.ket(i, 2), linalg.ket(jj, 2)), img)
        return float(np.linalg.eigvalsh((j + j.conj().T) / 2).min())

    def is_completely_positive(self, tol: float = CHOI_TOL) -> bool:
        return self.choi_min_eigenvalue() >= -tol


def bloch_affine_of(ch: KrausChannel) -> BlochAffine:
    """Extract (t, T) such that the channel sends Bloch vector r to t + T r."""
    if ch.in_dim != 2 or ch.out_dim != 2:
        raise DimensionMismatchError("Bloch form requires a qubit-to-qubit channel")
    t = bloch_vector(apply(ch, 0.5 * np.eye(2)))
    T = np.zeros((3, 3))
    for j, sj in enumerate(PAULIS):
        # traceless input isolates the linear part of the affine action
        T[:, j] = bloch_vector(apply(ch, 0.5 * sj))
    return BlochAffine(t, T)


# --- classical-quantum channels ----------------------------------------------


@dataclass(frozen=True)
class CqChannel:
    """Finite-alphabet map from labels to output density matrices."""

    alphabet: tuple
    states: Mapping[str, np.ndarray] = field(repr=False)

    def __post_init__(self):
        if not self.alphabet:
            raise FormatError("alphabet must be nonempty")
        dims = set()
        states = {}
        for x in self.alphabet:
            if x not in self.states:
                raise FormatError(f"missing output state for letter {x!r}")
            rho = np.asarray(self.states[x], dtype=complex)
            linalg.check_density_matrix(rho)
            dims.add(rho.shape[0])
            states[x] = rho
        if len(dims) != 1:
            raise DimensionMismatchError(f"output states have mixed dims {sorted(dims)}")
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", states)

    @property
    def out_dim(self) -> int:
        return next(iter(self.states.values())).shape[0]

    def __call__(self, x) -> np.ndarray:
        return self.states[x]


def cq_as_qq(n: CqChannel) -> KrausChannel:
    """Embed a cq-channel as the measure-and-prepare map
    xi -> sum_x rho_x <x|xi|x> on a Hilbert space indexed by the alphabet.
    """
    dim_in = len(n.alphabet)
    kraus = []
    for col, x in enumerate(n.alphabet):
        w, v = linalg.hermitian_eig(n.states[x], tol=1e-10)
        for k in range(len(w)):
            lam = max(w[k], 0.0)
            if lam <= linalg.EIG_CLIP:
                continue
            kraus.append(np.sqrt(lam) * np.outer(v[:, k], linalg.ket(col, dim_in)))
    return KrausChannel(dim_in, n.out_dim, tuple(kraus))


def measure_prepare_channel(
    pvm: Sequence[np.ndarray], prepared: Sequence[np.ndarray]
) -> KrausChannel:
    """Channel measuring a PVM and preparing a state per outcome.

    The projectors must be mutually orthogonal and sum to the identity
    (within 1e-10); each prepared output must be a valid density matrix.
    """
    pvm = [np.asarray(e, dtype=complex) for e in pvm]
    if len(pvm) != len(prepared):
        raise DimensionMismatchError("one prepared state per PVM element required")
    d = pvm[0].shape[0]
    res = float(np.max(np.abs(sum(pvm) - np.eye(d))))
    if res > 1e-10:
        raise FormatError(f"pvm completeness violated: residual {res:.3e} exceeds 1e-10")
    for a, ea in enumerate(pvm):
        for b, eb in enumerate(pvm):
            target = ea if a == b else 0.0
            res = float(np.max(np.abs(ea @ eb - target)))
            if res > 1e-10:
                raise FormatError(
                    f"pvm orthogonality violated for elements ({a}, {b}): "
                    f"residual {res:.3e} exceeds 1e-10"
                )
    kraus = []
    for ex, rho in zip(pvm, prepared):
        rho = linalg.check_density_matrix(np.asarray(rho, dtype=complex))
        we, ve = linalg.hermitian_eig(ex, tol=1e-10)
        range_vecs = [ve[:, k] for k in range(d) if we[k] > 0.5]
        wr, vr = linalg.hermitian_eig(rho, tol=1e-10)
        for m in range_vecs:
            for k in range(len(wr)):
                lam = max(wr[k], 0.0)
                if lam <= linalg.EIG_CLIP:
                    continue
                kraus.append(np.sqrt(lam) * np.outer(vr[:, k], m.conj()))
    return from_kraus(kraus)


# --- JSON interchange ---------------------------------------------------------


def _matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _matrix_from_json(data, what: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{what}: entries must be [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise FormatError(f"{what}: entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def channel_to_json(ch: KrausChannel) -> dict:
    return {
        "in_dim": ch.in_dim,
        "out_dim": ch.out_dim,
        "kraus": [_matrix_to_json(e) for e in ch.kraus],
    }


def channel_from_json(data: dict) -> KrausChannel:
    for key in ("in_dim", "out_dim", "kraus"):
        if key not in data:
            raise FormatError(f"channel file missing field {key!r}")
    kraus = [_matrix_from_json(m, f"kraus[{i}]") for i, m in enumerate(data["kraus"])]
    try:
        return KrausChannel(int(data["in_dim"]), int(data["out_dim"]), tuple(kraus))
    except DimensionMismatchError as exc:
        raise FormatError(str(exc)) from exc


def save_channel(ch: KrausChannel, path) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(channel_to_json(ch), fh, indent=1)
        fh.write("\n")


def load_channel(path) -> KrausChannel:
    with open(path) as fh:
        return channel_from_json(json.load(fh))


def cq_channel_from_json(data: dict) -> CqChannel:
    for key in ("alphabet", "out_dim", "states"):
        if key not in data:
            raise FormatError(f"cq-channel file missing field {key!r}")
    out_dim = int(data["out_dim"])
    states = {}
    for x in data["alphabet"]:
        if str(x) not in data["states"]:
            raise FormatError(f"cq-channel file missing state for letter {x!r}")
        rho = _matrix_from_json(data["states"][str(x)], f"states[{x}]")
        if rho.shape != (out_dim, out_dim):
            raise FormatError(
                f"states[{x}]: shape {rho.shape} does not match out_dim {out_dim}"
            )
        w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
        if w.min() < -linalg.PSD_TOL:
            raise FormatError(
                f"states[{x}]: positivity violated, eigenvalue residual "
                f"{-w.min():.3e} exceeds {linalg.PSD_TOL:.1e}"
            )
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > linalg.TRACE_TOL:
            raise FormatError(
                f"states[{x}]: unit trace violated, residual {abs(tr - 1.0):.3e} "
                f"exceeds {linalg.TRACE_TOL:.1e}"
            )
        res = linalg.hermiticity_residual(rho)
        if res > 1e-10:
            raise FormatError(
                f"states[{x}]: Hermiticity violated, residual {res:.3e} exceeds 1e-10"
            )
        states[x] = rho
    return CqChannel(tuple(data["alphabet"]), states)


def save_cq_channel(n: CqChannel, path) -> None:
    payload = {
        "alphabet": list(n.alphabet),
        "out_dim": n.out_dim,
        "states": {str(x): _matrix_to_json(n.states[x]) for x in n.alphabet},
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_cq_channel(path) -> CqChannel:
    with open(path) as fh:
        return cq_channel_from_json(json.load(fh))
