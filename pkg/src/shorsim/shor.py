"""Shor factorization driver on top of the register simulator."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import numtheory
from .config import DomainError, make_rng
from .gates import GateNetwork, GatePlacement, apply_modexp_oracle, run_network
from .numtheory import Failure
from .qft import build_qft_network, estimate_period_from_peak
from .register import (
    StateVector,
    check_width,
    measure_all,
    measure_subset,
    new_basis_state,
)


@dataclass
class ShorConfig:
    N: int
    input_width: int | None = None
    output_width: int | None = None
    approximate_qft: bool = False
    max_attempts: int = 10
    seed: int = 0
    trial_limit: int | None = None

    def __post_init__(self):
        if self.N < 2:
            raise DomainError(f"N must be >= 2, got {self.N}")
        L = self.N.bit_length()
        if self.output_width is None:
            self.output_width = L
        if self.input_width is None:
            self.input_width = 2 * L
        if (1 << self.output_width) <= self.N:
            raise DomainError(f"output width {self.output_width} cannot hold values below N={self.N}")
        if self.input_width < self.output_width:
            raise DomainError("input register must be at least as wide as the output register")
        if self.max_attempts < 1:
            raise DomainError(f"max_attempts must be >= 1, got {self.max_attempts}")

    @property
    def n_qubits(self) -> int:
        return self.input_width + self.output_width

    @property
    def input_qubits(self) -> range:
        return range(self.input_width)

    @property
    def output_qubits(self) -> range:
        return range(self.input_width, self.input_width + self.output_width)


@dataclass(eq=False)
class OrderFindingResult:
    a: int
    second_register_outcome: int
    second_register_probability: float
    offset: int
    y: int
    y_probability: float
    candidate_r: int | None
    first_register: StateVector = field(repr=False)


@dataclass
class AttemptRecord:
    a: int
    verdict: str
    second_register_outcome: int | None = None
    offset: int | None = None
    y: int | None = None
    candidate_r: int | None = None
    order: int | None = None
    factors: list[int] | None = None


@dataclass
class FactorizationTrace:
    N: int
    screen: str
    status: str  # success | classical | prime | exhausted
    factors: list[int] | None = None
    attempts: list[AttemptRecord] = field(default_factory=list)

    @property
    def total_attempts_used(self) -> int:
        return len(self.attempts)

    @property
    def succeeded(self) -> bool:
        return self.factors is not None

    def to_json(self) -> str:
        d = asdict(self)
        d["total_attempts_used"] = self.total_attempts_used
        return json.dumps(d, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# the deterministic parts of one run, memoized per (a, N, widths)


def _freeze(s: StateVector) -> StateVector:
    s.amplitudes.flags.writeable = False
    return s


@lru_cache(maxsize=64)
def _entangled_state(a: int, N: int, in_w: int, out_w: int) -> StateVector:
    s = new_basis_state(in_w + out_w, 0)
    s = run_network(s, GateNetwork(GatePlacement("A", (q,)) for q in range(in_w)))
    s = apply_modexp_oracle(s, range(in_w), range(in_w, in_w + out_w), a, N)
    return _freeze(s)


@lru_cache(maxsize=4096)
def _transformed(a: int, N: int, in_w: int, out_w: int, j: int, approx: bool) -> tuple[StateVector, StateVector]:
    """First register after seeing ``j`` on the second, before and after the QFT."""
    full = _entangled_state(a, N, in_w, out_w).amplitudes
    # the collapsed state is (first register) x |j>, so the slice is exact
    block = full[j << in_w : (j + 1) << in_w]
    first = StateVector(in_w, block / np.linalg.norm(block))
    _, net = build_qft_network(in_w, approximate=approx, include_bit_reversal=True)
    return _freeze(first), _freeze(run_network(first, net))


def run_order_finding(
    a: int, cfg: ShorConfig, rng: int | np.random.Generator | None = None
) -> OrderFindingResult:
    """One pass of the quantum period finder for base ``a``.

    Prepares ``|0>|0>``, applies ``A`` to every input qubit, evaluates
    ``a**x mod N`` into the output register, measures the output register,
    applies the QFT (with bit reversal) to the input register, measures it
    and runs continued-fraction recovery on the result.
    """
    N = cfg.N
    if numtheory.gcd(a, N) != 1:
        raise DomainError(f"a={a} is not coprime with N={N}")
    check_width(cfg.n_qubits)
    rng = make_rng(cfg.seed if rng is None else rng)
    in_w, out_w = cfg.input_width, cfg.output_width

    entangled = _entangled_state(a % N, N, in_w, out_w)
    second = measure_subset(entangled, cfg.output_qubits, rng)
    j = second.outcome
    first, transformed = _transformed(a % N, N, in_w, out_w, j, cfg.approximate_qft)
    offset = int(np.flatnonzero(np.abs(first.amplitudes) > 0)[0])

    final = measure_all(transformed, rng)
    y = final.outcome
    return OrderFindingResult(
        a=a,
        second_register_outcome=j,
        second_register_probability=second.probability,
        offset=offset,
        y=y,
        y_probability=final.probability,
        candidate_r=estimate_period_from_peak(y, in_w, N),
        first_register=first,
    )


def validate_order(a: int, candidate: int, N: int, max_multiple: int = 4) -> int | None:
    """Order of ``a`` mod ``N`` from a continued-fraction candidate.

    Tries ``k*candidate`` for ``k <= max_multiple``; the first period found
    may still be a multiple of the order, so it is reduced prime by prime.
    """
    for k in range(1, max_multiple + 1):
        if numtheory.modpow(a, k * candidate, N) == 1:
            return numtheory.reduce_to_order(a, k * candidate, N)
    return None


def _attempt(a: int, cfg: ShorConfig, rng: np.random.Generator) -> AttemptRecord:
    N = cfg.N
    g = numtheory.gcd(a, N)
    if g > 1:
        return AttemptRecord(a, "classical_shortcut", factors=sorted([g, N // g]))
    res = run_order_finding(a, cfg, rng)
    rec = AttemptRecord(
        a,
        verdict="",
        second_register_outcome=res.second_register_outcome,
        offset=res.offset,
        y=res.y,
        candidate_r=res.candidate_r,
    )
    if res.y == 0:
        rec.verdict = Failure.Y_ZERO.value
        return rec
    order = None if res.candidate_r is None else validate_order(a, res.candidate_r, N)
    if order is None:
        rec.verdict = Failure.BAD_Y.value
        return rec
    rec.order = order
    out = numtheory.factors_from_period(a, order, N)
    if isinstance(out, Failure):
        rec.verdict = out.value
        return rec
    rec.verdict = "success"
    rec.factors = list(out)
    return rec


def shor_factor(cfg: ShorConfig) -> FactorizationTrace:
    """Screen ``N``, then retry random bases until a factor pair is found."""
    N = cfg.N
    verdict = numtheory.screen(N, cfg.trial_limit)
    trace = FactorizationTrace(N, verdict.verdict, status="exhausted")
    if verdict.verdict == "prime":
        trace.status = "prime"
        return trace
    if verdict.verdict != "eligible":
        trace.status = "classical"
        trace.factors = sorted([verdict.factor, N // verdict.factor])
        return trace

    rng = make_rng(cfg.seed)
    for _ in range(cfg.max_attempts):
        a = int(rng.integers(2, N))
        rec = _attempt(a, cfg, rng)
        trace.attempts.append(rec)
        if rec.factors is not None:
            f1, f2 = rec.factors
            # trial-division check on every success path
            if not (1 < f1 < N and N % f1 == 0 and f1 * f2 == N):
                raise AssertionError(f"non-factor {rec.factors} reported for N={N}")
            trace.factors = rec.factors
            trace.status = "success"
            break
    return trace


def success_probability_amplification(epsilon: float, k: int) -> float:
    """Chance of at least one success in ``k`` runs that each fail with ``epsilon``."""
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in [0, 1], got {epsilon}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    return 1.0 - epsilon**k


def trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])


def empirical_success_rate(
    N: int, trials: int, seed: int, attempts: int = 1, **overrides
) -> tuple[float, dict[str, int]]:
    """Fraction of independent runs (``attempts`` tries each) that factor ``N``.

    The histogram counts the failure reason of every failed attempt.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    wins = 0
    hist: Counter[str] = Counter({f.value: 0 for f in Failure})
    for t in range(trials):
        cfg = ShorConfig(N, max_attempts=attempts, seed=trial_seed(seed, t), **overrides)
        trace = shor_factor(cfg)
        wins += trace.succeeded
        for rec in trace.attempts:
            if rec.factors is None:
                hist[rec.verdict] += 1
    return wins / trials, dict(hist)
