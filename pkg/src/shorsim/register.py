"""Pure-state quantum register.

Basis convention: qubit ``i`` is bit ``2**i`` of the basis index, so the
register value is ``x = sum_i 2**i * a_i``.  The ket string
``|a_{n-1} ... a_0>`` is only a display form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .config import TOL, DomainError, ResourceError, make_rng, max_qubits


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DomainError(f"n_qubits must be >= 1, got {self.n_qubits}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_qubits,):
            raise DomainError(
                f"expected {1 << self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def ket(self, x: int) -> str:
        """Display label ``|a_{n-1}...a_0>`` for basis index ``x``."""
        return "|" + format(x, f"0{self.n_qubits}b") + ">"

    def to_json(self) -> str:
        amps = [[float(c.real), float(c.imag)] for c in self.amplitudes]
        return json.dumps({"n_qubits": self.n_qubits, "amplitudes": amps})

    @classmethod
    def from_json(cls, text: str) -> "StateVector":
        obj = json.loads(text)
        amps = np.array([complex(re, im) for re, im in obj["amplitudes"]])
        return cls(int(obj["n_qubits"]), amps)


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    outcome: int
    bits: list[int]
    probability: float
    post_state: StateVector


def check_width(n_qubits: int) -> None:
    cap = max_qubits()
    if n_qubits > cap:
        raise ResourceError(f"{n_qubits} qubits exceeds simulator cap of {cap}")


def new_basis_state(n_qubits: int, value: int) -> StateVector:
    if n_qubits < 1:
        raise DomainError(f"n_qubits must be >= 1, got {n_qubits}")
    check_width(n_qubits)
    if not 0 <= value < (1 << n_qubits):
        raise DomainError(f"value {value} does not fit in {n_qubits} qubits")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[value] = 1.0
    return StateVector(n_qubits, amps)


def from_amplitudes(amplitudes: Sequence[complex], normalize: bool = True) -> StateVector:
    """Wrap an amplitude array of length ``2**n``, optionally normalizing it."""
    amps = np.array(amplitudes, dtype=np.complex128)
    n = int(amps.size).bit_length() - 1
    if amps.size < 2 or amps.size != 1 << n:
        raise DomainError(f"amplitude count {amps.size} is not a power of two >= 2")
    if normalize:
        nrm = np.linalg.norm(amps)
        if nrm < TOL.degenerate:
            raise DomainError("cannot normalize the zero vector")
        amps /= nrm
    return StateVector(n, amps)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Return <a|b>."""
    if a.n_qubits != b.n_qubits:
        raise DomainError(f"width mismatch: {a.n_qubits} vs {b.n_qubits}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def probabilities(s: StateVector) -> np.ndarray:
    return np.abs(s.amplitudes) ** 2


@lru_cache(maxsize=64)
def _outcome_keys(n_qubits: int, qubits: tuple[int, ...]) -> np.ndarray:
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    key = np.zeros_like(idx)
    for k, q in enumerate(qubits):
        key |= ((idx >> q) & 1) << k
    key.flags.writeable = False
    return key


def _check_subset(s: StateVector, qubits: Sequence[int]) -> tuple[int, ...]:
    qs = tuple(int(q) for q in qubits)
    if not qs:
        raise DomainError("qubit subset is empty")
    if len(set(qs)) != len(qs):
        raise DomainError(f"duplicate qubit indices in {list(qs)}")
    for q in qs:
        if not 0 <= q < s.n_qubits:
            raise DomainError(f"qubit {q} out of range for {s.n_qubits}-qubit register")
    return qs


def marginal_probabilities(s: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Distribution of the integer read from ``qubits`` (listed qubit k is bit k)."""
    qs = _check_subset(s, qubits)
    key = _outcome_keys(s.n_qubits, qs)
    return np.bincount(key, weights=probabilities(s), minlength=1 << len(qs))


def collapse(s: StateVector, qubits: Sequence[int], outcome: int) -> MeasurementRecord:
    """Project onto ``outcome`` of ``qubits`` and renormalize.

    Raises ``DomainError`` for an outcome of (numerically) zero probability.
    """
    qs = _check_subset(s, qubits)
    if not 0 <= outcome < (1 << len(qs)):
        raise DomainError(f"outcome {outcome} does not fit in {len(qs)} qubits")
    mask = _outcome_keys(s.n_qubits, qs) == outcome
    kept = np.where(mask, s.amplitudes, 0.0)
    p = float(np.vdot(kept, kept).real)
    if p < TOL.degenerate:
        raise DomainError(f"outcome {outcome} has probability {p:.3g}; cannot collapse")
    kept /= np.sqrt(p)
    bits = [(outcome >> k) & 1 for k in range(len(qs))]
    return MeasurementRecord(outcome, bits, p, StateVector(s.n_qubits, kept))


def _sample(weights: np.ndarray, rng: np.random.Generator) -> int:
    cdf = np.cumsum(weights)
    u = rng.random() * cdf[-1]
    # side="right" skips zero-weight entries
    x = int(np.searchsorted(cdf, u, side="right"))
    return min(x, int(np.flatnonzero(weights)[-1]))


def measure_subset(
    s: StateVector, qubit_indices: Sequence[int], rng_seed: int | np.random.Generator | None
) -> MeasurementRecord:
    rng = make_rng(rng_seed)
    qs = _check_subset(s, qubit_indices)
    outcome = _sample(marginal_probabilities(s, qs), rng)
    return collapse(s, qs, outcome)


def measure_all(s: StateVector, rng_seed: int | np.random.Generator | None) -> MeasurementRecord:
    rng = make_rng(rng_seed)
    probs = probabilities(s)
    x = _sample(probs, rng)
    post = np.zeros_like(s.amplitudes)
    post[x] = 1.0
    bits = [(x >> k) & 1 for k in range(s.n_qubits)]
    return MeasurementRecord(x, bits, float(probs[x]), StateVector(s.n_qubits, post))
