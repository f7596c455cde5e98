"""Shared tolerances, resource caps and exception types."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(ValueError):
    """State does not satisfy what an operation assumes (e.g. dirty ancilla)."""


class ResourceError(RuntimeError):
    """Requested size exceeds a configured simulator cap."""


class NumericError(ArithmeticError):
    """Numerical integration drifted beyond tolerance."""


@dataclass(frozen=True)
class Tolerances:
    state: float = 1e-10       # normalization / equality of states
    gate: float = 1e-12        # per-gate norm drift
    degenerate: float = 1e-12  # projected norm below this cannot be sampled
    peak_floor: float = 1e-4   # default spectrum peak floor
    zero_prob: float = 1e-16   # probabilities below this are written as 0


TOL = Tolerances()

CAP_ENV = "SHORSIM_MAX_QUBITS"
DEFAULT_MAX_QUBITS = 26
DENSE_DFT_MAX_QUBITS = 14
DENSITY_MAX_QUBITS = 12


def max_qubits() -> int:
    """State-vector qubit cap; overridable through ``SHORSIM_MAX_QUBITS``."""
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        cap = int(raw)
    except ValueError:
        raise ResourceError(f"{CAP_ENV}={raw!r} is not an integer") from None
    if cap < 1:
        raise ResourceError(f"{CAP_ENV} must be positive, got {cap}")
    return cap


def make_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    """Seeded PCG64 generator; a ``Generator`` passes through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
