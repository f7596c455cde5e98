"""Dephasing noise on density matrices and the decoherence scaling laws.

The channel damps every off-diagonal element of ``rho`` (computational
basis) by ``exp(-gamma * S * t)`` and leaves the diagonal alone.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from decimal import Decimal

import numpy as np

from .config import DENSITY_MAX_QUBITS, TOL, DomainError, ResourceError
from .gates import GateNetwork, GatePlacement, apply_placement_inplace
from .qft import Spectrum, analyze_spectrum, build_qft_network, format_prob, periodic_state
from .register import StateVector, from_amplitudes


@dataclass(eq=False)
class DensityMatrix:
    n_qubits: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=np.complex128)
        d = 1 << self.n_qubits
        if rho.shape != (d, d):
            raise DomainError(f"expected a {d}x{d} matrix, got {rho.shape}")
        self.entries = rho

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.entries)).copy()

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def purity(self) -> float:
        return float(np.real(np.vdot(self.entries, self.entries)))


@dataclass(frozen=True)
class NoiseModel:
    gamma: float
    t_elem: float
    S: float | None = None  # effective qubit count; None means register width

    def __post_init__(self):
        if not self.gamma >= 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if not self.t_elem > 0:
            raise DomainError(f"t_elem must be > 0, got {self.t_elem}")
        if self.S is not None and self.S < 1:
            raise DomainError(f"S must be >= 1, got {self.S}")

    @property
    def tau_dec(self) -> float:
        return math.inf if self.gamma == 0 else 1.0 / self.gamma

    def damping(self, n_qubits: int, duration: float) -> float:
        """Off-diagonal survival factor after ``duration``."""
        S = n_qubits if self.S is None else self.S
        if math.isinf(self.gamma):
            return 0.0 if duration > 0 else 1.0
        return math.exp(-self.gamma * S * duration)


def from_pure(s: StateVector) -> DensityMatrix:
    psi = s.amplitudes
    return DensityMatrix(s.n_qubits, np.outer(psi, psi.conj()))


def _conjugate(g: GatePlacement) -> GatePlacement:
    if g.kind == "B":
        return GatePlacement("B", g.targets, -g.phase)
    return g


def _shifted(g: GatePlacement, n: int) -> GatePlacement:
    return GatePlacement(g.kind, tuple(t + n for t in g.targets), g.phase)


def apply_gate(rho: DensityMatrix, g: GatePlacement) -> DensityMatrix:
    """``rho -> U rho U^dagger`` for a single placement."""
    n = rho.n_qubits
    for t in g.targets:
        if not 0 <= t < n:
            raise DomainError(f"qubit {t} out of range for {n}-qubit density matrix")
    # flattened rho is a 2n-qubit vector: row qubit q is bit q+n, column qubit q is bit q
    flat = rho.entries.copy().reshape(-1)
    apply_placement_inplace(flat, 2 * n, _shifted(g, n))
    apply_placement_inplace(flat, 2 * n, _conjugate(g))
    return DensityMatrix(n, flat.reshape(rho.entries.shape))


def apply_unitary(rho: DensityMatrix, net: GateNetwork) -> DensityMatrix:
    for i, g in enumerate(net):
        try:
            rho = apply_gate(rho, g)
        except DomainError as exc:
            raise DomainError(f"gate {i} ({g.kind} on {list(g.targets)}): {exc}") from exc
    return rho


def dephase(rho: DensityMatrix, model: NoiseModel, duration: float) -> DensityMatrix:
    if duration < 0:
        raise DomainError(f"duration must be >= 0, got {duration}")
    f = model.damping(rho.n_qubits, duration)
    out = rho.entries * f
    np.fill_diagonal(out, np.diag(rho.entries))
    return DensityMatrix(rho.n_qubits, out)


def _check_noisy_args(width: int, r: int, l: int) -> None:
    if width > DENSITY_MAX_QUBITS:
        raise ResourceError(f"density matrices capped at {DENSITY_MAX_QUBITS} qubits, got {width}")
    if r < 1 or not 0 <= l < r:
        raise DomainError(f"need r >= 1 and 0 <= l < r, got r={r}, l={l}")
    if (1 << width) % r:
        raise DomainError(f"r={r} must divide 2**{width}")


def noisy_dft_run(
    width: int, r: int, l: int, model: NoiseModel, floor: float = TOL.peak_floor
) -> tuple[Spectrum, float]:
    """QFT of the period-``r`` comb with dephasing for ``t_elem`` after every gate.

    Returns the output diagonal as a spectrum and the total probability on
    the ideal peaks ``k * 2**width / r``.
    """
    _check_noisy_args(width, r, l)
    rho = from_pure(periodic_state(width, r, l))
    _, net = build_qft_network(width, include_bit_reversal=True)
    for g in net:
        rho = dephase(apply_gate(rho, g), model, model.t_elem)
    diag = rho.diagonal()
    spectrum = analyze_spectrum(from_amplitudes(np.sqrt(np.clip(diag, 0, None)), normalize=False), floor)
    peaks = np.arange(0, 1 << width, (1 << width) // r)
    return spectrum, float(diag[peaks].sum())


def predicted_success_prob(width: int, r: int, model: NoiseModel) -> float:
    """Peak probability of :func:`noisy_dft_run` from a closed form.

    With ``r = 2**p`` the input is a basis state on the low ``p`` qubits times
    ``|+>`` on every higher qubit.  Uniform dephasing is a mixture of "nothing"
    (weight ``f``) and a full computational-basis measurement; every later
    gate on a processed qubit is diagonal, so each high qubit can be read
    right after its ``A`` gate.  Before the first dephasing event such a qubit
    reads 0 with certainty; after it, with probability 1/2.  Summing over the
    step of the first event gives the result.
    """
    _check_noisy_args(width, r, 0)
    p = r.bit_length() - 1
    _, net = build_qft_network(width, include_bit_reversal=True)
    a_pos = [i + 1 for i, g in enumerate(net) if g.kind == "A" and g.targets[0] >= p]
    f = model.damping(width, model.t_elem)
    total = f ** len(net)
    for s in range(1, len(net) + 1):
        pending = sum(pos > s for pos in a_pos)
        total += f ** (s - 1) * (1 - f) * 0.5**pending
    return total


def success_model(L: int, model: NoiseModel, alpha: float, beta: float) -> float:
    """``exp(-gamma * t_elem * L**(alpha + beta))``."""
    if L < 1:
        raise DomainError(f"L must be >= 1, got {L}")
    return math.exp(-model.gamma * model.t_elem * L ** (alpha + beta))


def expected_repetitions(L: int, model: NoiseModel, alpha: float, beta: float) -> float:
    return 1.0 / success_model(L, model, alpha, beta)


def max_factorable_size(model: NoiseModel, alpha: float, beta: float) -> float:
    """Largest size ``L`` with coherent completion: ``(tau_dec/t_elem)**(1/(alpha+beta))``."""
    if model.gamma <= 0 or alpha + beta <= 0:
        raise DomainError("need gamma > 0 and alpha + beta > 0")
    return (model.tau_dec / model.t_elem) ** (1.0 / (alpha + beta))


@dataclass(frozen=True)
class MeritEntry:
    technology: str
    t_elem: float
    tau_dec: float
    M: float
    speculative: bool = False


# (technology, t_elem, tau_dec, speculative); seconds
_MERIT_ROWS = [
    ("Mössbauer nucleus", "1e-19", "1e-10", False),
    ("Electrons GaAs", "1e-13", "1e-10", True),
    ("Electrons Au", "1e-14", "1e-8", False),
    ("Trapped ions", "1e-14", "1e-1", True),
    ("Optical cavities", "1e-14", "1e-5", False),
    ("Electron spin", "1e-7", "1e-3", False),
    ("Electron quantum dot", "1e-6", "1e-3", True),
    ("Nuclear spin", "1e-3", "1e4", False),
    ("Superconductor islands", "1e-9", "1e-3", True),
]


def figure_of_merit_table() -> list[MeritEntry]:
    """Technology rows with ``M = tau_dec / t_elem`` (decimal-exact ratio)."""
    return [
        MeritEntry(name, float(t), float(tau), float(Decimal(tau) / Decimal(t)), spec)
        for name, t, tau, spec in _MERIT_ROWS
    ]


def merit_table_text(entries: list[MeritEntry]) -> str:
    width = max(len(e.technology) for e in entries) + 1
    lines = [f"{'Technology':<{width}} {'t_elem':>8} {'tau_dec':>8} {'M':>8}"]
    for e in entries:
        name = e.technology + ("*" if e.speculative else "")
        lines.append(f"{name:<{width}} {e.t_elem:>8.0e} {e.tau_dec:>8.0e} {e.M:>8.0e}")
    return "\n".join(lines)


def merit_table_json(entries: list[MeritEntry]) -> str:
    return json.dumps(
        [
            {"technology": e.technology, "t_elem": e.t_elem, "tau_dec": e.tau_dec, "M": e.M,
             "speculative": e.speculative}
            for e in entries
        ],
        ensure_ascii=False,
        indent=2,
    )


def noise_sweep(widths, gammas, t_elem: float, r: int = 4, l: int = 0) -> list[tuple[int, float, float]]:
    """``(width, gamma, success_prob)`` rows over the grid."""
    rows = []
    for w in widths:
        for g in gammas:
            _, p = noisy_dft_run(w, r, l, NoiseModel(g, t_elem))
            rows.append((w, g, p))
    return rows


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["width", "gamma", "success_prob"])
    for width, gamma, p in rows:
        w.writerow([width, f"{gamma:.12g}", format_prob(p)])
    return buf.getvalue()
