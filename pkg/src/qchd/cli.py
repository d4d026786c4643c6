"""Command-line front end: exponent curves, reproduction of the worked
example numbers, property-suite verification, and the finite-n simulators.

All randomness flows from the --seed flag (default 0); rerunning a command
with identical flags produces byte-identical output files. The QCHD_THREADS
environment variable caps thread parallelism for curve sampling.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds as bd
from . import channels as ch
from . import divergences as dv
from . import exponents as ex
from . import linalg
from . import strategies as st
from .errors import QchdError, UnknownExampleError

REPRODUCE_IDS = (
    "harrow-lambda",
    "harrow-bound",
    "harrow-adaptive",
    "pure-chernoff",
    "depolarizing-fig",
    "amplitude-fig",
)
VERIFY_SUITES = ("nussbaum-szkola", "exponent-identities", "prop1-floor", "classical-dp")


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("QCHD_THREADS", "1")))
    except ValueError:
        return 1


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _status(name: str, ok: bool, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _named_channels(args) -> list[tuple[str, ch.KrausChannel]]:
    if args.channel == "depolarizing":
        values = _parse_floats(args.q or "")
        if not values:
            raise QchdError("depolarizing channel requires --q with at least one value")
        return [(f"depolarizing_q{v:g}", ch.depolarizing(v)) for v in values]
    if args.channel == "amplitude-damping":
        values = _parse_floats(args.gamma or "")
        if not values:
            raise QchdError("amplitude-damping channel requires --gamma values")
        return [(f"amplitude_damping_g{v:g}", ch.amplitude_damping(v)) for v in values]
    if args.channel == "pauli":
        if not args.p:
            raise QchdError("pauli channel requires --p with four probabilities")
        probs = _parse_floats(args.p)
        if len(probs) != 4:
            raise QchdError("--p must list exactly four probabilities")
        label = "pauli_" + "_".join(f"{v:g}" for v in probs)
        return [(label, ch.pauli(probs))]
    raise QchdError(f"unknown named channel {args.channel!r}")


# --------------------------------------------------------------------------
# curve


def cmd_curve(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    workers = _workers()
    summary = {}
    if args.channel_file:
        if not args.channel_file_bar:
            raise QchdError("--channel-file requires --channel-file-bar for the pair")
        m = ch.load_channel(args.channel_file)
        mbar = ch.load_channel(args.channel_file_bar)
        targets = [("pair", ex.ChannelPairSearchProfile(m, mbar, seed=args.seed))]
    else:
        # discrimination power of a single channel: the curve is taken over
        # the optimal input pair frozen at order 1/2
        targets = [
            (label, ex.PowerSearchProfile(channel, seed=args.seed).fixed_pair_profile()[0])
            for label, channel in _named_channels(args)
        ]
    for label, profile in targets:
        curve = ex.emit_curve(profile, kind=args.kind, points=args.points, workers=workers)
        path = outdir / f"{label}_{args.kind}.csv"
        curve.write_csv(path)
        problems = curve.check_invariants()
        summary[label] = {
            "csv": str(path),
            "points": len(curve.rows),
            "first_value": curve.values[0],
            "last_value": curve.values[-1],
            "alpha_star_range": [curve.alpha_star[0], curve.alpha_star[-1]],
            "invariant_violations": problems,
        }
        print(f"wrote {path} ({len(curve.rows)} points)")
        if problems:
            print(f"  warning: {'; '.join(problems)}")
    with open(outdir / "summary.json", "w", newline="\n") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True, default=float)
        fh.write("\n")
    print(f"wrote {outdir / 'summary.json'}")
    return 0


# --------------------------------------------------------------------------
# reproduce


def _reproduce_harrow_lambda() -> bool:
    m, mbar = ch.harrow_channels()
    span = bd.kraus_product_span(m, mbar)
    comb = bd.evaluate_combination(span, bd.harrow_ansatz_coefficients())
    closed = bd.harrow_lambda_min_closed_form()
    ok = abs(comb.lambda_min - closed) <= 1e-9 and abs(comb.lambda_min - 0.091) < 5e-4
    return _status(
        "harrow-lambda",
        ok,
        f"lambda_min = {_fmt(comb.lambda_min)} vs closed form {_fmt(closed)} (approx 0.091)",
    )


def _reproduce_harrow_bound() -> bool:
    m, mbar = ch.harrow_channels()
    comb = bd.evaluate_combination(
        bd.kraus_product_span(m, mbar), bd.harrow_ansatz_coefficients()
    )
    value = bd.chernoff_upper_bound(comb)
    ok = abs(value - 13.83) <= 0.01
    return _status("harrow-bound", ok, f"4 log2(1/lambda_min) = {_fmt(value)} vs 13.83")


def _reproduce_harrow_adaptive() -> bool:
    m, mbar = ch.harrow_channels()
    rep = st.run_adaptive_script(m, mbar, st.harrow_separation_script())
    ok = rep.bayes <= 1e-12
    return _status("harrow-adaptive", ok, f"two-use feed-forward error = {_fmt(rep.bayes)}")


def _reproduce_pure_chernoff() -> bool:
    rho = linalg.ketbra(ch.KET0)
    sigma = linalg.ketbra(ch.KET_PLUS)
    worst = 0.0
    for alpha in np.linspace(0.01, 0.99, 99):
        value = (1.0 - alpha) * dv.renyi_divergence(rho, sigma, alpha)
        worst = max(worst, abs(value - 1.0))
    ok = worst <= 1e-10
    return _status("pure-chernoff", ok, f"max |(1-a) D_a - 1| = {worst:.3e} over 99 orders")


def _reproduce_depolarizing_fig() -> bool:
    ok = True
    for q in (0.2, 0.5, 0.8):
        profile = ex.PowerSearchProfile(ch.depolarizing(q))
        worst = 0.0
        for alpha in np.linspace(0.1, 0.9, 9):
            closed = np.log2(ex.Q(q, alpha)) / (alpha - 1.0)
            worst = max(worst, abs(profile.renyi(alpha) - closed))
        curve = ex.power_curve(ch.depolarizing(q), points=25, workers=_workers())
        problems = curve.check_invariants()
        d = ex.depolarizing_stein_power(q)
        endpoint = abs(curve.values[0] - d)
        here = worst <= 1e-5 and not problems and endpoint <= 1e-5
        ok &= _status(
            f"depolarizing-fig q={q}",
            here,
            f"max closed-form gap {worst:.2e}, B(0)-D gap {endpoint:.2e}, "
            f"violations {problems or 'none'}",
        )
    return ok


def _reproduce_amplitude_fig() -> bool:
    ok = True
    for gamma in (0.2, 0.5, 0.8):
        rho1, rho2 = ex.amplitude_damping_optimal_outputs(gamma)
        oracle = dv.SpectralPair.from_states(rho1, rho2)
        worst = 0.0
        for alpha in np.linspace(0.1, 0.9, 9):
            closed = np.log2(ex.W(gamma, alpha)) / (alpha - 1.0)
            worst = max(worst, abs(oracle.renyi(alpha) - closed))
        profile = ex.PowerSearchProfile(ch.amplitude_damping(gamma))
        pair_profile, _ = profile.fixed_pair_profile()
        curve = ex.emit_curve(pair_profile, points=25, workers=_workers())
        problems = curve.check_invariants()
        endpoint = abs(curve.values[0] - pair_profile.stein())
        final = abs(curve.values[-1])
        here = worst <= 1e-6 and not problems and endpoint <= 1e-5 and final <= 1e-5
        ok &= _status(
            f"amplitude-fig gamma={gamma}",
            here,
            f"closed form vs matrix oracle gap {worst:.2e}, B(0)-D gap {endpoint:.2e}, "
            f"B(D) = {final:.2e}, violations {problems or 'none'}",
        )
        report = ex.amplitude_damping_pair_check(gamma, profile=profile)
        if not report["candidate_is_optimal"]:
            note = (
                f"  note: the damped-equator pair is near-optimal, not optimal; "
                f"the search gains up to {report['max_regular_gain']:.4f} bits at "
                f"moderate orders (pair slightly above the output equator)"
            )
            if report["boundary_escape"]:
                note += (
                    "; near order 1 the supremum escapes toward the pure "
                    "fixed-point output and diverges"
                )
            print(note + ". Searched values are authoritative.")
    return ok


def cmd_reproduce(args) -> int:
    handlers = {
        "harrow-lambda": _reproduce_harrow_lambda,
        "harrow-bound": _reproduce_harrow_bound,
        "harrow-adaptive": _reproduce_harrow_adaptive,
        "pure-chernoff": _reproduce_pure_chernoff,
        "depolarizing-fig": _reproduce_depolarizing_fig,
        "amplitude-fig": _reproduce_amplitude_fig,
    }
    if args.example == "all":
        ok = all([handlers[name]() for name in REPRODUCE_IDS])
    elif args.example in handlers:
        ok = handlers[args.example]()
    else:
        raise UnknownExampleError(
            f"unknown example {args.example!r}; choose from {', '.join(REPRODUCE_IDS)}"
        )
    return 0 if ok else 1


# --------------------------------------------------------------------------
# verify


def _verify_nussbaum_szkola(seed: int) -> bool:
    rng = np.random.default_rng(seed)
    alphas = np.linspace(0.1, 0.9, 9)
    worst = 0.0
    for _ in range(50):
        dim = int(rng.integers(2, 6))
        rho = linalg.random_density_matrix(dim, rng)
        sigma = linalg.random_density_matrix(dim, rng)
        gamma, gamma_bar = dv.nussbaum_szkola(rho, sigma)
        for alpha in alphas:
            gap = abs(
                dv.renyi_divergence(rho, sigma, alpha)
                - dv.classical_renyi(gamma, gamma_bar, alpha)
            )
            worst = max(worst, gap)
    return _status(
        "nussbaum-szkola",
        worst <= 1e-8,
        f"max divergence-equality gap {worst:.3e} over 50 pairs x 9 orders",
    )


def _verify_exponent_identities(seed: int) -> bool:
    ok = True
    for q in (0.2, 0.5, 0.8):
        profile = ex.PowerSearchProfile(ch.depolarizing(q))
        d = profile.stein()
        worst_c = 0.0
        for r in np.linspace(0.0, d, 10):
            b_r = ex.hoeffding_exponent(profile, r).value
            worst_c = max(worst_c, abs(ex.chernoff_exponent(profile, b_r, r).value))
        rng = np.random.default_rng(seed)
        worst_ch = 0.0
        for _ in range(3):
            delta = rng.uniform(-0.9 * d, 0.9 * d)
            r_ab = ex.solve_crossing_rate(profile, delta, 0.0)
            c_val = ex.chernoff_exponent(profile, delta, 0.0).value
            b_val = ex.hoeffding_exponent(profile, r_ab).value
            worst_ch = max(worst_ch, abs(c_val - r_ab), abs(c_val - (b_val - delta)))
        here = worst_c <= 1e-6 and worst_ch <= 1e-6
        ok &= _status(
            f"exponent-identities q={q}",
            here,
            f"max |C(B(r),r)| = {worst_c:.2e}, crossing identity gap {worst_ch:.2e}",
        )
    return ok


def _verify_prop1_floor(seed: int) -> bool:
    m, mbar = ch.harrow_channels()
    comb = bd.evaluate_combination(
        bd.kraus_product_span(m, mbar), bd.harrow_ansatz_coefficients()
    )
    rng = np.random.default_rng(seed)
    lam4 = comb.lambda_min**4
    worst = np.inf
    for _ in range(200):
        psi = linalg.random_pure_state(m.in_dim**2, rng)
        out_m = ch.apply_to_vector(m, psi, ref_dim=m.in_dim)
        out_mbar = ch.apply_to_vector(mbar, psi, ref_dim=m.in_dim)
        worst = min(worst, linalg.fidelity(out_m, out_mbar) ** 2 - lam4)
    report = st.nonadaptive_floor_check(m, mbar, comb, n=1, samples=200, seed=seed)
    here = worst >= -1e-9 and report.passed
    return _status(
        "prop1-floor",
        here,
        f"min F^2 - lambda^4 = {worst:.3e}; sampled error floor "
        f"{report.min_error:.3e} >= {report.floor:.3e}",
    )


def _verify_classical_dp(seed: int) -> bool:
    rng = np.random.default_rng(seed)
    ok = True
    for trial in range(3):
        w = rng.random((2, 2)) + 0.05
        wbar = rng.random((2, 2)) + 0.05
        pair = st.ClassicalChannelPair(
            w / w.sum(axis=1, keepdims=True), wbar / wbar.sum(axis=1, keepdims=True)
        )
        fine = True
        for n in range(1, 6):
            adaptive = st.classical_adaptive_optimum(pair, n)
            parallel = st.classical_parallel_optimum(pair, n)
            fine &= adaptive <= parallel + 1e-12
        ok &= _status(f"classical-dp trial={trial}", fine, "adaptive <= parallel for n=1..5")
    return ok


def cmd_verify(args) -> int:
    suites = {
        "nussbaum-szkola": _verify_nussbaum_szkola,
        "exponent-identities": _verify_exponent_identities,
        "prop1-floor": _verify_prop1_floor,
        "classical-dp": _verify_classical_dp,
    }
    if args.suite == "all":
        ok = all([suites[name](args.seed) for name in VERIFY_SUITES])
    elif args.suite in suites:
        ok = suites[args.suite](args.seed)
    else:
        raise QchdError(f"unknown suite {args.suite!r}; choose from {', '.join(VERIFY_SUITES)}")
    return 0 if ok else 1


# --------------------------------------------------------------------------
# bound search


def cmd_bound(args) -> int:
    if args.harrow:
        m, mbar = ch.harrow_channels()
    else:
        if not (args.channel_file and args.channel_file_bar):
            raise QchdError("provide --harrow or both --channel-file and --channel-file-bar")
        m = ch.load_channel(args.channel_file)
        mbar = ch.load_channel(args.channel_file_bar)
    span = bd.kraus_product_span(m, mbar)
    if args.ansatz:
        comb = bd.evaluate_combination(span, bd.harrow_ansatz_coefficients())
    else:
        comb = bd.search_positive_combination(
            span, restarts=args.restarts, iterations=args.iterations, seed=args.seed
        )
    if comb is None or not comb.is_positive:
        print("no positive-definite combination found")
        print(json.dumps({"found": False}, indent=1))
        return 1
    floor = bd.error_lower_bound(comb, 1)
    cap = bd.chernoff_upper_bound(comb)
    print(f"lambda_min            : {_fmt(comb.lambda_min)}")
    print(f"one-use error floor   : {_fmt(floor)}")
    print(f"parallel exponent cap : {_fmt(cap)}")
    print(f"hermiticity residual  : {comb.hermiticity_residual:.3e}")
    payload = {
        "found": True,
        "lambda_min": comb.lambda_min,
        "error_floor_n1": floor,
        "chernoff_upper_bound": cap,
        "hermiticity_residual": comb.hermiticity_residual,
        "coefficients": [[float(c.real), float(c.imag)] for c in comb.coefficients],
    }
    print(json.dumps(payload, indent=1, sort_keys=True))
    return 0


# --------------------------------------------------------------------------
# separation witness


def cmd_separate_harrow(args) -> int:
    m, mbar = ch.harrow_channels()
    rep = st.run_adaptive_script(m, mbar, st.harrow_separation_script())
    comb = bd.evaluate_combination(
        bd.kraus_product_span(m, mbar), bd.harrow_ansatz_coefficients()
    )
    floor = st.nonadaptive_floor_check(
        m, mbar, comb, n=2, samples=args.samples, seed=args.seed
    )
    print(f"adaptive two-use error      : {_fmt(rep.bayes)}")
    print(f"parallel floor (n=2)        : {_fmt(floor.floor)}")
    print(f"min sampled parallel error  : {_fmt(floor.min_error)} over {floor.samples} inputs")
    separated = rep.bayes <= 1e-12 and floor.passed
    print(
        "verdict: SEPARATED (adaptive exact, parallel error floored)"
        if separated
        else "verdict: INCONCLUSIVE"
    )
    return 0 if separated else 1


# --------------------------------------------------------------------------
# classical dp


def cmd_classical_dp(args) -> int:
    pair = st.load_classical_pair(args.pair)
    adaptive = st.classical_adaptive_optimum(pair, args.n, args.a, args.b)
    parallel = st.classical_parallel_optimum(pair, args.n, args.a, args.b)
    print(f"adaptive optimum : {_fmt(adaptive)}")
    print(f"parallel optimum : {_fmt(parallel)}")
    if adaptive > 0 and parallel > 0:
        print(f"adaptive exponent: {_fmt(-np.log2(adaptive) / args.n)}")
        print(f"parallel exponent: {_fmt(-np.log2(parallel) / args.n)}")
    return 0


# --------------------------------------------------------------------------
# discrimination power


def cmd_power(args) -> int:
    label, channel = _named_channels(args)[0]
    profile = ex.PowerSearchProfile(channel, seed=args.seed)
    stein = ex.power_stein(channel, profile=profile)
    print(f"channel                : {label}")
    if np.isinf(stein.value):
        pair = stein.argmax_state
        print("unrestricted stein     : infinite (a pure output is reachable)")
        print(f"  witness pair (bloch) : {np.round(ch.bloch_vector(pair[0]), 6).tolist()}"
              f" vs {np.round(ch.bloch_vector(pair[1]), 6).tolist()}")
    else:
        print(f"unrestricted stein     : {_fmt(stein.value)}")
    pair_profile, (rho, sigma) = profile.fixed_pair_profile()
    sym = ex.chernoff_exponent(pair_profile, 0.0, 0.0)
    print(f"optimal-pair stein     : {_fmt(pair_profile.stein())}")
    print(f"symmetric exponent     : {_fmt(sym.value)} at alpha* = {_fmt(sym.alpha_star)}")
    print(f"optimal pair (bloch in): {np.round(ch.bloch_vector(rho), 6).tolist()}"
          f" vs {np.round(ch.bloch_vector(sigma), 6).tolist()}")
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qchd",
        description="Error exponents for binary quantum channel discrimination",
    )
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_channel_flags(p, with_files=False):
        p.add_argument(
            "--channel",
            choices=("depolarizing", "pauli", "amplitude-damping"),
            help="named qubit channel for discrimination power",
        )
        p.add_argument("--q", help="comma-separated depolarizing parameters")
        p.add_argument("--gamma", help="comma-separated damping parameters")
        p.add_argument("--p", help="four comma-separated Pauli probabilities")
        if with_files:
            p.add_argument("--channel-file", help="JSON file for the first channel")
            p.add_argument("--channel-file-bar", help="JSON file for the second channel")

    p_curve = sub.add_parser("curve", help="emit exponent curves as CSV")
    add_channel_flags(p_curve, with_files=True)
    p_curve.add_argument("--kind", choices=("hoeffding", "chernoff"), default="hoeffding")
    p_curve.add_argument("--points", type=int, default=50)
    p_curve.add_argument("--out", default="curves", help="output directory")
    p_curve.set_defaults(func=cmd_curve)

    p_rep = sub.add_parser("reproduce", help="recompute a worked example number")
    p_rep.add_argument("example", help=f"one of: {', '.join(REPRODUCE_IDS)}, all")
    p_rep.set_defaults(func=cmd_reproduce)

    p_ver = sub.add_parser("verify", help="run a property suite")
    p_ver.add_argument("suite", help=f"one of: {', '.join(VERIFY_SUITES)}, all")
    p_ver.set_defaults(func=cmd_verify)

    p_bound = sub.add_parser("bound", help="search positive Kraus-product combinations")
    p_bound.add_argument("--harrow", action="store_true", help="use the built-in example pair")
    p_bound.add_argument("--ansatz", action="store_true", help="evaluate the hand ansatz")
    p_bound.add_argument("--channel-file")
    p_bound.add_argument("--channel-file-bar")
    p_bound.add_argument("--restarts", type=int, default=64)
    p_bound.add_argument("--iterations", type=int, default=300)
    p_bound.set_defaults(func=cmd_bound)

    p_sep = sub.add_parser("separate-harrow", help="run the separation witness end to end")
    p_sep.add_argument("--samples", type=int, default=500)
    p_sep.set_defaults(func=cmd_separate_harrow)

    p_dp = sub.add_parser("classical-dp", help="exact adaptive/parallel classical optima")
    p_dp.add_argument("--pair", required=True, help='JSON file {"W": [[...]], "Wbar": [[...]]}')
    p_dp.add_argument("--n", type=int, required=True)
    p_dp.add_argument("--a", type=float, default=0.0)
    p_dp.add_argument("--b", type=float, default=0.0)
    p_dp.set_defaults(func=cmd_classical_dp)

    p_pow = sub.add_parser("power", help="discrimination power of a named channel")
    add_channel_flags(p_pow)
    p_pow.set_defaults(func=cmd_power)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QchdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
