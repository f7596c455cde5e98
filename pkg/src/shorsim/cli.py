"""Command-line entry point: ``shorsim <subcommand> ...``.

Exit codes: 0 success, 1 usage or domain error, 2 attempts exhausted,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import noise, numtheory, pulse, qft
from .config import CAP_ENV, DomainError, ResourceError, make_rng
from .gates import run_network
from .shor import ShorConfig, run_order_finding, shor_factor, validate_order

EXIT_OK, EXIT_USAGE, EXIT_EXHAUSTED, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text, encoding="utf-8")


def _require_seed(args) -> None:
    if args.seed is None and not args.no_seed_ok:
        raise UsageError("--seed is required (or pass --no-seed-ok)")


_SHORTCUT_NOTE = {
    "even": "classical: even",
    "prime_power": "classical: prime power",
    "trivial_gcd": "classical: small factor",
}


def cmd_factor(args) -> int:
    if args.N < 2:
        raise UsageError(f"N must be >= 2, got {args.N}")
    _require_seed(args)
    seed = args.seed if args.seed is not None else int(np.random.SeedSequence().entropy % 2**63)
    cfg = ShorConfig(
        args.N,
        approximate_qft=args.approx_qft,
        max_attempts=args.attempts,
        seed=seed,
        trial_limit=args.trial_division,
    )
    trace = shor_factor(cfg)
    if args.trace:
        Path(args.trace).write_text(trace.to_json() + "\n", encoding="utf-8")
    if trace.status == "prime":
        print(f"{args.N} is prime")
        return EXIT_OK
    if trace.factors is None:
        reasons = ", ".join(r.verdict for r in trace.attempts)
        print(f"{args.N}: no factor found after {trace.total_attempts_used} attempts ({reasons})")
        return EXIT_EXHAUSTED
    f1, f2 = trace.factors
    line = f"{args.N} = {f1} × {f2}"
    if trace.status == "classical":
        line += f" ({_SHORTCUT_NOTE[trace.screen]})"
    elif trace.attempts[-1].verdict == "classical_shortcut":
        line += f" (classical: gcd with a={trace.attempts[-1].a})"
    print(line)
    print(f"attempts: {trace.total_attempts_used}", file=sys.stderr)
    return EXIT_OK


def cmd_period(args) -> int:
    a, N = args.a, args.N
    if N < 2:
        raise UsageError(f"N must be >= 2, got {N}")
    g = numtheory.gcd(a, N)
    if g != 1:
        raise UsageError(f"a not coprime with N; gcd = {g}")
    if args.method == "classical":
        print(numtheory.brute_force_period(a, N))
        return EXIT_OK
    _require_seed(args)
    cfg = ShorConfig(N, approximate_qft=args.approx_qft, seed=args.seed or 0)
    rng = make_rng(args.seed)
    for attempt in range(1, args.attempts + 1):
        res = run_order_finding(a, cfg, rng)
        r = None if res.candidate_r is None else validate_order(a, res.candidate_r, N)
        if r is not None:
            print(r)
            print(f"retries: {attempt - 1}", file=sys.stderr)
            return EXIT_OK
    print(f"no period recovered after {args.attempts} runs", file=sys.stderr)
    return EXIT_EXHAUSTED


def cmd_qft(args) -> int:
    if args.period < 1 or not 0 <= args.offset < args.period:
        raise UsageError("need --period >= 1 and 0 <= --offset < --period")
    state = qft.periodic_state(args.bits, args.period, args.offset)
    _, net = qft.build_qft_network(args.bits, approximate=args.approx, include_bit_reversal=True)
    spectrum = qft.analyze_spectrum(run_network(state, net))
    _emit(spectrum.to_csv() if args.format == "csv" else spectrum.peaks_json(), args.out)
    return EXIT_OK


def cmd_noise_sweep(args) -> int:
    rows = noise.noise_sweep(args.bits, args.gamma, args.t_elem, r=args.period, l=args.offset)
    _emit(noise.sweep_csv(rows), args.out)
    return EXIT_OK


def cmd_pulse(args) -> int:
    sys_ = pulse.SpinPairSystem(
        omega1=args.omega1,
        omega2=args.omega2,
        coupling=args.coupling,
        drive_amplitude=args.drive_amp,
        drive_frequency=args.omega2 + args.coupling if args.drive_freq is None else args.drive_freq,
    )
    if args.duration is not None:
        duration = args.duration
    elif args.drive_amp > 0:
        duration = sys_.pi_pulse_duration()
    else:
        raise UsageError("--duration is required when --drive-amp is 0")
    res = pulse.evolve_pulse(sys_, args.init, duration, args.steps)
    _emit(res.trajectory_csv(args.every), args.out)
    final = np.abs(res.final_state.amplitudes) ** 2
    pops = " ".join(f"p{lab}={p:.6f}" for lab, p in zip(pulse.LABELS, final))
    line = f"cnot_fidelity={res.fidelity_to_cnot:.6f} final {pops}"
    print(line, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_fom(args) -> int:
    entries = noise.figure_of_merit_table()
    if args.format == "json":
        _emit(noise.merit_table_json(entries), args.out)
    else:
        _emit(noise.merit_table_text(entries), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="shorsim",
        description="Quantum factoring simulator. "
        f"The state-vector qubit cap can be raised with {CAP_ENV}.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("factor", help="factor N with the simulated order finder (worked example: 15)")
    f.add_argument("N", type=int)
    f.add_argument("--attempts", type=int, default=10, help="maximum quantum attempts k")
    f.add_argument("--seed", type=int)
    f.add_argument("--no-seed-ok", action="store_true")
    f.add_argument("--approx-qft", action="store_true")
    f.add_argument("--trial-division", type=int, metavar="LIMIT", default=None,
                   help="trial-divide by primes up to LIMIT before the quantum path")
    f.add_argument("--trace", metavar="FILE", help="write the factorization trace as JSON")
    f.set_defaults(func=cmd_factor)

    r = sub.add_parser("period", help="order of a modulo N (classical brute force or quantum)")
    r.add_argument("a", type=int)
    r.add_argument("N", type=int)
    r.add_argument("--method", choices=("quantum", "classical"), default="quantum")
    r.add_argument("--seed", type=int)
    r.add_argument("--no-seed-ok", action="store_true")
    r.add_argument("--attempts", type=int, default=10)
    r.add_argument("--approx-qft", action="store_true")
    r.set_defaults(func=cmd_period)

    q = sub.add_parser(
        "qft",
        help="output spectrum of a period-r comb after the QFT network "
        "(sharp peaks when r divides 2**bits, broadened otherwise)",
    )
    q.add_argument("--bits", type=int, required=True)
    q.add_argument("--period", type=int, required=True)
    q.add_argument("--offset", type=int, default=0)
    q.add_argument("--approx", action="store_true", help="drop distant conditional phases")
    q.add_argument("--format", choices=("csv", "json"), default="csv")
    q.add_argument("--out")
    q.set_defaults(func=cmd_qft)

    n = sub.add_parser(
        "noise-sweep",
        help="peak probability of a dephased QFT versus register width and gamma (CSV)",
    )
    n.add_argument("--bits", type=int, nargs="+", required=True)
    n.add_argument("--gamma", type=float, nargs="+", required=True)
    n.add_argument("--t-elem", type=float, default=1.0)
    n.add_argument("--period", type=int, default=4)
    n.add_argument("--offset", type=int, default=0)
    n.add_argument("--out")
    n.set_defaults(func=cmd_noise_sweep)

    u = sub.add_parser(
        "pulse",
        help="population trajectories of two coupled spins under a drive; "
        "a pi-pulse at w2+coupling acts as CNOT",
    )
    u.add_argument("--omega1", type=float, default=1.0)
    u.add_argument("--omega2", type=float, default=0.6)
    u.add_argument("--coupling", type=float, default=0.02)
    u.add_argument("--drive-freq", type=float, default=None, help="default: omega2 + coupling")
    u.add_argument("--drive-amp", type=float, default=0.002)
    u.add_argument("--duration", type=float, default=None, help="default: pi / drive-amp")
    u.add_argument("--init", choices=pulse.LABELS, default="10")
    u.add_argument("--steps", type=int, default=None)
    u.add_argument("--every", type=int, default=100, help="write every n-th time step")
    u.add_argument("--out")
    u.set_defaults(func=cmd_pulse)

    m = sub.add_parser("fom", help="decoherence figure of merit tau_dec/t_elem per technology")
    m.add_argument("--format", choices=("text", "json"), default="text")
    m.add_argument("--out")
    m.set_defaults(func=cmd_fom)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
