"""Finite-n discrimination simulators.

Covers the minimum-error (Helstrom) test on fixed output pairs, parallel
product-input strategies, replay of scripted feed-forward protocols, the
exact dynamic program for adaptive discrimination of classical channels,
and Monte-Carlo certification of the positive-combination error floor.

Error conventions: uniform priors; the Bayes error is (type1 + type2) / 2.
The weighted objective 2^(an) type1 + 2^(bn) type2 is minimized by the
likelihood test, so at a = b = 0 it equals twice the Bayes error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import bounds as bd
from . import channels as ch
from . import linalg
from .errors import BudgetExceededError, DimensionMismatchError, FormatError

PARALLEL_DIM_CAP = 256
DP_LEAF_CAP = 10_000_000


@dataclass(frozen=True)
class ErrorReport:
    """Type-I/II errors of a binary test at n channel uses."""

    type1: float
    type2: float
    n: int

    @property
    def bayes(self) -> float:
        return 0.5 * (self.type1 + self.type2)


@dataclass(frozen=True)
class ParallelStrategy:
    """Product-form input, one factor per channel use."""

    inputs: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "inputs", tuple(np.asarray(r, dtype=complex) for r in self.inputs)
        )

    @property
    def n(self) -> int:
        return len(self.inputs)

    @classmethod
    def repeated(cls, rho: np.ndarray, n: int) -> "ParallelStrategy":
        return cls(tuple(rho for _ in range(n)))


@dataclass(frozen=True)
class AdaptiveScript:
    """Scripted feed-forward protocol: a fixed first input, then one rule per
    later use mapping the previous output state to the next input state.

    ``final_measurement`` is an optional effect operator T accepting the first
    hypothesis; when omitted the terminal states are tested optimally.
    """

    initial_input: np.ndarray
    step_rules: tuple
    final_measurement: np.ndarray | None = None

    @property
    def n(self) -> int:
        return 1 + len(self.step_rules)


@dataclass(frozen=True)
class ClassicalChannelPair:
    """Two row-stochastic matrices over common input/output alphabets."""

    w: np.ndarray
    wbar: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        wbar = np.asarray(self.wbar, dtype=float)
        if w.shape != wbar.shape or w.ndim != 2:
            raise DimensionMismatchError("W and Wbar must be matrices of equal shape")
        for name, mat in (("W", w), ("Wbar", wbar)):
            if mat.min() < -1e-12:
                raise FormatError(f"{name}: negative entry {mat.min():.3e}")
            rows = mat.sum(axis=1)
            if np.max(np.abs(rows - 1.0)) > 1e-12:
                raise FormatError(
                    f"{name}: row sums deviate from 1 by {np.max(np.abs(rows - 1.0)):.3e}"
                )
        object.__setattr__(self, "w", np.clip(w, 0.0, None))
        object.__setattr__(self, "wbar", np.clip(wbar, 0.0, None))

    @property
    def n_inputs(self) -> int:
        return self.w.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.w.shape[1]


def load_classical_pair(path) -> ClassicalChannelPair:
    with open(path) as fh:
        data = json.load(fh)
    for key in ("W", "Wbar"):
        if key not in data:
            raise FormatError(f"classical pair file missing field {key!r}")
    return ClassicalChannelPair(np.asarray(data["W"]), np.asarray(data["Wbar"]))


# --------------------------------------------------------------------------
# state discrimination


def helstrom_error(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Minimum uniform-prior error for one shot: (1 - ||rho - sigma||_1 / 2) / 2."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionMismatchError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    return float(0.5 * (1.0 - 0.5 * linalg.trace_norm(rho - sigma)))


def helstrom_report(rho: np.ndarray, sigma: np.ndarray, n: int = 1) -> ErrorReport:
    """Type-I/II errors of the optimal test (projector onto the positive part
    of rho - sigma accepts the first hypothesis)."""
    diff = np.asarray(rho, dtype=complex) - np.asarray(sigma, dtype=complex)
    w, v = linalg.hermitian_eig(diff, tol=1e-9)
    t = (v[:, w > 0.0] @ v[:, w > 0.0].conj().T) if (w > 0.0).any() else np.zeros_like(diff)
    type1 = float(np.trace(rho).real - np.trace(rho @ t).real)
    type2 = float(np.trace(sigma @ t).real)
    return ErrorReport(max(type1, 0.0), max(type2, 0.0), n)


def parallel_error(
    m: ch.KrausChannel,
    mbar: ch.KrausChannel,
    strat: ParallelStrategy,
    dim_cap: int = PARALLEL_DIM_CAP,
) -> ErrorReport:
    """Helstrom error of the n-fold outputs under the given product inputs.

    This evaluates one strategy, hence upper-bounds the parallel optimum.
    """
    if m.out_dim**strat.n > dim_cap:
        raise BudgetExceededError(
            f"output dimension {m.out_dim ** strat.n} exceeds cap {dim_cap}"
        )
    out_m = linalg.kron_all([ch.apply(m, rho) for rho in strat.inputs])
    out_mbar = linalg.kron_all([ch.apply(mbar, rho) for rho in strat.inputs])
    return helstrom_report(out_m, out_mbar, strat.n)


def run_adaptive_script(
    m: ch.KrausChannel, mbar: ch.KrausChannel, script: AdaptiveScript
) -> ErrorReport:
    """Replay the script under both hypotheses and test the terminal states."""
    state_m = ch.apply(m, script.initial_input)
    state_mbar = ch.apply(mbar, script.initial_input)
    for rule in script.step_rules:
        state_m = ch.apply(m, rule(state_m))
        state_mbar = ch.apply(mbar, rule(state_mbar))
    if script.final_measurement is None:
        return helstrom_report(state_m, state_mbar, script.n)
    t = np.asarray(script.final_measurement, dtype=complex)
    type1 = float(np.trace(state_m @ (np.eye(t.shape[0]) - t)).real)
    type2 = float(np.trace(state_mbar @ t).real)
    return ErrorReport(max(type1, 0.0), max(type2, 0.0), script.n)


def harrow_separation_script() -> AdaptiveScript:
    """Two-use protocol discriminating the measure-and-prepare example pair
    perfectly: first input |0>|0>; then the first output is routed into the
    data slot with the control set to |1>, so the terminal state is |0> under
    one hypothesis and |1> under the other."""
    ket1 = linalg.ketbra(ch.KET1)
    initial = np.kron(linalg.ketbra(ch.KET0), linalg.ketbra(ch.KET0))
    return AdaptiveScript(initial, (lambda prev: np.kron(prev, ket1),))


# --------------------------------------------------------------------------
# classical adaptive dynamic program


def _check_dp_budget(pair: ClassicalChannelPair, n: int) -> None:
    if (pair.n_inputs * pair.n_outputs) ** n > DP_LEAF_CAP:
        raise BudgetExceededError(
            f"({pair.n_inputs} inputs x {pair.n_outputs} outputs)^{n} exceeds "
            f"{DP_LEAF_CAP} leaves"
        )


def classical_adaptive_optimum(
    pair: ClassicalChannelPair, n: int, a: float = 0.0, b: float = 0.0
) -> float:
    """Exact min over deterministic adaptive input policies and final tests of
    2^(an) type1 + 2^(bn) type2, by backward induction over output histories.

    The likelihood test is optimal at every leaf, contributing
    min(2^(an) P_W(history), 2^(bn) P_Wbar(history)); randomized policies
    cannot beat the best vertex of a linear objective.
    """
    _check_dp_budget(pair, n)
    w, wbar = pair.w, pair.wbar
    fa, fb = 2.0 ** (a * n), 2.0 ** (b * n)
    n_in, n_out = pair.n_inputs, pair.n_outputs

    def visit(step: int, lik: float, lik_bar: float) -> float:
        if step == n:
            return min(fa * lik, fb * lik_bar)
        return min(
            sum(visit(step + 1, lik * w[x, y], lik_bar * wbar[x, y]) for y in range(n_out))
            for x in range(n_in)
        )

    return float(visit(0, 1.0, 1.0))


def classical_parallel_optimum(
    pair: ClassicalChannelPair, n: int, a: float = 0.0, b: float = 0.0
) -> float:
    """Same objective restricted to constant-input policies (best letter repeated)."""
    _check_dp_budget(pair, n)
    fa, fb = 2.0 ** (a * n), 2.0 ** (b * n)
    best = np.inf
    for x in range(pair.n_inputs):
        # distribution of the sufficient statistic: product likelihood pairs
        liks = np.array([1.0])
        liks_bar = np.array([1.0])
        for _ in range(n):
            liks = np.outer(liks, pair.w[x]).ravel()
            liks_bar = np.outer(liks_bar, pair.wbar[x]).ravel()
        best = min(best, float(np.sum(np.minimum(fa * liks, fb * liks_bar))))
    return best


# --------------------------------------------------------------------------
# floor certification


@dataclass(frozen=True)
class FloorCheckReport:
    """Monte-Carlo check of the positive-combination error floor."""

    n: int
    samples: int
    floor: float
    min_error: float
    passed: bool


def nonadaptive_floor_check(
    m: ch.KrausChannel,
    mbar: ch.KrausChannel,
    comb: bd.Combination,
    n: int,
    samples: int = 500,
    seed: int = 0,
    slack: float = 1e-9,
) -> FloorCheckReport:
    """Sample Haar-random pure inputs on R (x) A^n (R matching the input
    dimension) and verify every parallel Helstrom error clears the floor
    lambda_min^(4n) / 4."""
    floor = bd.error_lower_bound(comb, n)
    mn = ch.tensor_power(m, n)
    mbarn = ch.tensor_power(mbar, n)
    ref = mn.in_dim
    rng = np.random.default_rng(seed)
    min_error = np.inf
    for _ in range(samples):
        psi = linalg.random_pure_state(ref * mn.in_dim, rng)
        out_m = ch.apply_to_vector(mn, psi, ref_dim=ref)
        out_mbar = ch.apply_to_vector(mbarn, psi, ref_dim=ref)
        err = helstrom_error(out_m, out_mbar)
        min_error = min(min_error, err)
    return FloorCheckReport(
        n=n,
        samples=samples,
        floor=floor,
        min_error=float(min_error),
        passed=bool(min_error >= floor - slack),
    )
