"""Quantum discrete Fourier transform.

Two routes to the same operator:

* :func:`dft_matrix_apply` evaluates ``c_y = 2**(-m/2) sum_x exp(2 pi i x y / 2**m) c_x``
  directly from the definition (dense, row blocks).
* :func:`build_qft_network` emits the gate network made of ``A`` gates and
  conditional phases ``B(pi / 2**(j-k))``; its raw output is the transform
  with the bits of ``y`` reversed, so an optional SWAP stage is appended
  when the natural ordering is wanted.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import numtheory
from .config import DENSE_DFT_MAX_QUBITS, TOL, DomainError, ResourceError
from .gates import GateNetwork, GatePlacement
from .register import StateVector, probabilities


@dataclass(frozen=True)
class QftPlan:
    width: int
    approximate: bool = False
    neglect_threshold: int | None = None
    include_bit_reversal: bool = False

    @property
    def gate_count(self) -> int:
        """A and B gates only; the optional SWAP stage is not counted."""
        m, d = self.width, self.neglect_threshold
        if d is None:
            return m * (m + 1) // 2
        kept_b = sum(m - dist for dist in range(1, min(d, m - 1) + 1))
        return m + kept_b


@dataclass(eq=False)
class Spectrum:
    width: int
    probs: np.ndarray = field(repr=False)
    peaks: list[tuple[int, float]] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["y", "prob"])
        for y, p in enumerate(self.probs):
            w.writerow([y, format_prob(p)])
        return buf.getvalue()

    def peaks_json(self) -> str:
        return json.dumps([{"y": int(y), "prob": float(p)} for y, p in self.peaks])


def format_prob(p: float) -> str:
    """12 significant digits; values below the zero threshold print as 0."""
    if abs(p) < TOL.zero_prob:
        return "0"
    return f"{p:.12g}"


def read_spectrum_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0] != ["y", "prob"]:
        raise DomainError(f"unexpected header {rows[0]}")
    probs = np.zeros(len(rows) - 1)
    for y, p in rows[1:]:
        probs[int(y)] = float(p)
    return probs


def neglect_threshold(width: int) -> int:
    """Largest qubit distance kept by the approximate transform."""
    return int(math.floor(math.log2(width))) + 2


def b_phase(j: int, k: int) -> float:
    return math.pi / 2 ** abs(j - k)


def build_qft_network(
    width: int, approximate: bool = False, include_bit_reversal: bool = False
) -> tuple[QftPlan, GateNetwork]:
    """Gate network for the transform on ``width`` qubits.

    Order: ``A`` on the top qubit, then for each lower qubit ``t`` the phases
    ``B(j, t)`` for ``j = m-1 .. t+1`` followed by ``A`` on ``t``.  When
    ``approximate`` is set, phases between qubits farther apart than
    ``floor(log2(width)) + 2`` are dropped.
    """
    if width < 1:
        raise DomainError(f"width must be >= 1, got {width}")
    d = neglect_threshold(width) if approximate else None
    net = GateNetwork()
    for t in range(width - 1, -1, -1):
        for j in range(width - 1, t, -1):
            if d is not None and j - t > d:
                continue
            net.append(GatePlacement("B", (j, t), b_phase(j, t)))
        net.append(GatePlacement("A", (t,)))
    if include_bit_reversal:
        for i in range(width // 2):
            net.append(GatePlacement("SWAP", (i, width - 1 - i)))
    plan = QftPlan(width, approximate, d, include_bit_reversal)
    return plan, net


def bit_reversal_indices(width: int) -> np.ndarray:
    idx = np.arange(1 << width, dtype=np.int64)
    rev = np.zeros_like(idx)
    for i in range(width):
        rev |= ((idx >> i) & 1) << (width - 1 - i)
    return rev


def bit_reversal_permutation(s: StateVector) -> StateVector:
    out = np.empty_like(s.amplitudes)
    out[bit_reversal_indices(s.n_qubits)] = s.amplitudes
    return StateVector(s.n_qubits, out)


def dft_matrix_apply(s: StateVector, block: int = 1024) -> StateVector:
    m = s.n_qubits
    if m > DENSE_DFT_MAX_QUBITS:
        raise ResourceError(f"dense DFT capped at {DENSE_DFT_MAX_QUBITS} qubits, got {m}")
    Q = 1 << m
    # exact integer exponents keep the phases accurate for every width
    roots = np.exp(2j * np.pi * np.arange(Q) / Q)
    x = np.arange(Q, dtype=np.int64)
    out = np.empty(Q, dtype=np.complex128)
    for start in range(0, Q, block):
        y = x[start : start + block]
        w = roots[np.outer(y, x) % Q]
        out[start : start + block] = w @ s.amplitudes
    return StateVector(m, out / math.sqrt(Q))


def periodic_state(width: int, r: int, l: int) -> StateVector:
    """Equal superposition of ``|j*r + l>`` over all terms that fit."""
    if r < 1 or not 0 <= l < r:
        raise DomainError(f"need r >= 1 and 0 <= l < r, got r={r}, l={l}")
    Q = 1 << width
    if l >= Q:
        raise DomainError(f"offset {l} does not fit in {width} qubits")
    amps = np.zeros(Q, dtype=np.complex128)
    support = np.arange(l, Q, r)
    amps[support] = 1.0 / math.sqrt(len(support))
    return StateVector(width, amps)


def analyze_spectrum(s: StateVector, floor: float = TOL.peak_floor) -> Spectrum:
    """Strict (cyclic) local maxima of ``|c_y|**2`` above ``floor``."""
    if floor < 0:
        raise DomainError(f"floor must be >= 0, got {floor}")
    p = probabilities(s)
    is_peak = (p > np.roll(p, 1)) & (p > np.roll(p, -1)) & (p > floor * p.sum())
    peaks = [(int(y), float(p[y])) for y in np.flatnonzero(is_peak)]
    return Spectrum(s.n_qubits, p, peaks)


def estimate_period_from_peak(y: int, m: int, N: int) -> int | None:
    """Denominator ``r < N`` of the continued-fraction convergent of ``y/2**m``.

    Only convergents with ``|y/2**m - k/r| <= 1/2**(m+1)`` qualify; the largest
    qualifying denominator wins.  ``y = 0`` carries no information.
    """
    Q = 1 << m
    if not 0 <= y < Q:
        raise DomainError(f"y={y} outside [0, {Q})")
    if y == 0:
        return None
    best = None
    for p, q in numtheory.continued_fraction(y, Q, N).convergents:
        if q >= N:
            break
        # |y/Q - p/q| <= 1/(2Q)  <=>  2|y q - p Q| <= q
        if 2 * abs(y * q - p * Q) <= q:
            best = q
    return best
