"""Elementary gates, gate networks and the modular-exponentiation oracle.

Kernels act in place on an amplitude array whose leading axis is the
``2**n`` basis index; trailing axes are carried along untouched, which
lets the same kernels drive density matrices column by column.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import numtheory
from .config import TOL, DomainError, PreconditionError
from .register import StateVector

KINDS = ("NOT", "A", "B", "CNOT", "SWAP")
_TWO_QUBIT = {"B", "CNOT", "SWAP"}

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class GatePlacement:
    kind: str
    targets: tuple[int, ...]
    phase: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if self.kind not in KINDS:
            raise DomainError(f"unknown gate kind {self.kind!r}")
        want = 2 if self.kind in _TWO_QUBIT else 1
        if len(self.targets) != want:
            raise DomainError(f"{self.kind} takes {want} target(s), got {list(self.targets)}")
        if want == 2 and self.targets[0] == self.targets[1]:
            raise DomainError(f"{self.kind} targets must be distinct, got {list(self.targets)}")
        if self.kind == "B":
            if self.phase is None or not math.isfinite(self.phase):
                raise DomainError(f"B gate needs a finite phase, got {self.phase}")
        elif self.phase is not None:
            raise DomainError(f"{self.kind} gate takes no phase")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "targets": list(self.targets)}
        if self.phase is not None:
            d["phase"] = self.phase
        return d


class GateNetwork:
    """Ordered list of gate placements, applied left to right."""

    def __init__(self, gates: Iterable[GatePlacement] = ()):
        self.gates: list[GatePlacement] = list(gates)

    def __iter__(self) -> Iterator[GatePlacement]:
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __getitem__(self, i):
        return self.gates[i]

    def append(self, g: GatePlacement) -> None:
        self.gates.append(g)

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)

    def to_json(self) -> str:
        return json.dumps([g.to_dict() for g in self.gates])

    @classmethod
    def from_json(cls, text: str) -> "GateNetwork":
        return cls(
            GatePlacement(d["kind"], tuple(d["targets"]), d.get("phase")) for d in json.loads(text)
        )


# ---------------------------------------------------------------------------
# in-place kernels


def _check_qubit(n: int, q: int) -> None:
    if not 0 <= q < n:
        raise DomainError(f"qubit {q} out of range for {n}-qubit register")


def _view1(arr: np.ndarray, n: int, q: int) -> np.ndarray:
    return arr.reshape((1 << (n - q - 1), 2, 1 << q) + arr.shape[1:])


def _view2(arr: np.ndarray, n: int, qa: int, qb: int):
    lo, hi = min(qa, qb), max(qa, qb)
    v = arr.reshape((1 << (n - hi - 1), 2, 1 << (hi - lo - 1), 2, 1 << lo) + arr.shape[1:])

    def at(bits: dict[int, int]):
        return (slice(None), bits[hi], slice(None), bits[lo], slice(None))

    return v, at


def _kernel_not(arr, n, q):
    v = _view1(arr, n, q)
    tmp = v[:, 0].copy()
    v[:, 0] = v[:, 1]
    v[:, 1] = tmp


def _kernel_a(arr, n, q):
    v = _view1(arr, n, q)
    a0 = v[:, 0].copy()
    a1 = v[:, 1]
    v[:, 0] = (a0 + a1) * _SQRT_HALF
    v[:, 1] = (a0 - a1) * _SQRT_HALF


def _kernel_b(arr, n, q1, q2, phi):
    v, at = _view2(arr, n, q1, q2)
    v[at({q1: 1, q2: 1})] *= np.exp(1j * phi)


def _kernel_cnot(arr, n, control, target):
    v, at = _view2(arr, n, control, target)
    s0, s1 = at({control: 1, target: 0}), at({control: 1, target: 1})
    tmp = v[s0].copy()
    v[s0] = v[s1]
    v[s1] = tmp


def apply_placement_inplace(arr: np.ndarray, n: int, g: GatePlacement) -> None:
    """Apply ``g`` to ``arr`` (leading axis of length ``2**n``) in place."""
    for q in g.targets:
        _check_qubit(n, q)
    if g.kind == "A":
        _kernel_a(arr, n, g.targets[0])
    elif g.kind == "NOT":
        _kernel_not(arr, n, g.targets[0])
    elif g.kind == "B":
        _kernel_b(arr, n, g.targets[0], g.targets[1], g.phase)
    elif g.kind == "CNOT":
        _kernel_cnot(arr, n, *g.targets)
    else:  # SWAP as three CNOTs
        a, b = g.targets
        _kernel_cnot(arr, n, a, b)
        _kernel_cnot(arr, n, b, a)
        _kernel_cnot(arr, n, a, b)


def _applied(s: StateVector, g: GatePlacement) -> StateVector:
    out = s.amplitudes.copy()
    apply_placement_inplace(out, s.n_qubits, g)
    return StateVector(s.n_qubits, out)


# ---------------------------------------------------------------------------
# public gate operations (pure: return a new state)


def apply_not(s: StateVector, q: int) -> StateVector:
    return _applied(s, GatePlacement("NOT", (q,)))


def apply_a(s: StateVector, q: int) -> StateVector:
    """|0> -> (|0>+|1>)/sqrt2, |1> -> (|0>-|1>)/sqrt2 on qubit ``q``."""
    return _applied(s, GatePlacement("A", (q,)))


def apply_b(s: StateVector, q1: int, q2: int, phi: float) -> StateVector:
    """Conditional phase: multiply terms with both qubits set by ``exp(i*phi)``."""
    return _applied(s, GatePlacement("B", (q1, q2), float(phi)))


def apply_cnot(s: StateVector, control: int, target: int) -> StateVector:
    return _applied(s, GatePlacement("CNOT", (control, target)))


def apply_swap(s: StateVector, q1: int, q2: int) -> StateVector:
    return _applied(s, GatePlacement("SWAP", (q1, q2)))


def run_network(s: StateVector, net: GateNetwork | Sequence[GatePlacement]) -> StateVector:
    out = s.amplitudes.copy()
    for i, g in enumerate(net):
        try:
            apply_placement_inplace(out, s.n_qubits, g)
        except DomainError as exc:
            raise DomainError(f"gate {i} ({g.kind} on {list(g.targets)}): {exc}") from exc
    return StateVector(s.n_qubits, out)


# ---------------------------------------------------------------------------
# reversible function evaluation


def register_values(n: int, qubits: Sequence[int]) -> np.ndarray:
    """Integer read from ``qubits`` for every basis index (listed qubit k is bit k)."""
    idx = np.arange(1 << n, dtype=np.int64)
    val = np.zeros_like(idx)
    for k, q in enumerate(qubits):
        val |= ((idx >> q) & 1) << k
    return val


@lru_cache(maxsize=32)
def _modexp_permutation(
    n: int, inq: tuple[int, ...], outq: tuple[int, ...], a: int, N: int
) -> np.ndarray:
    x = register_values(n, inq)
    y = register_values(n, outq)
    table = np.array([numtheory.modpow(a, v, N) for v in range(1 << len(inq))], dtype=np.int64)
    y_new = (y + table[x]) % (1 << len(outq))
    dest = np.arange(1 << n, dtype=np.int64)
    for k, q in enumerate(outq):
        dest &= ~(1 << q)
        dest |= ((y_new >> k) & 1) << q
    dest.flags.writeable = False
    return dest


def apply_modexp_oracle(
    s: StateVector,
    input_qubits: Sequence[int],
    output_qubits: Sequence[int],
    a: int,
    N: int,
) -> StateVector:
    """Map ``|x>|0>`` to ``|x>|a**x mod N>``.

    On the full space the map is ``|x>|y> -> |x>|(y + f(x)) mod 2**w>`` with
    ``w`` the output width, a basis permutation and therefore unitary.
    """
    inq, outq = tuple(input_qubits), tuple(output_qubits)
    if set(inq) & set(outq):
        raise DomainError("input and output registers overlap")
    for q in inq + outq:
        _check_qubit(s.n_qubits, q)
    if N < 2 or N >= (1 << len(outq)):
        raise DomainError(f"N={N} does not fit the {len(outq)}-qubit output register")
    if numtheory.gcd(a, N) != 1:
        raise DomainError(f"a={a} is not coprime with N={N}")
    y = register_values(s.n_qubits, outq)
    dirty = float(np.sum(np.abs(s.amplitudes[y != 0]) ** 2))
    if dirty > TOL.state:
        raise PreconditionError(f"output register is not |0> (weight {dirty:.3g} elsewhere)")
    dest = _modexp_permutation(s.n_qubits, inq, outq, a % N, N)
    out = np.empty_like(s.amplitudes)
    out[dest] = s.amplitudes
    return StateVector(s.n_qubits, out)
