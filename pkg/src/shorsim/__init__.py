"""Quantum register simulator and Shor factoring toolkit."""

from .config import DomainError, NumericError, PreconditionError, ResourceError
from .register import StateVector, new_basis_state
from .shor import ShorConfig, shor_factor

__all__ = [
    "DomainError",
    "NumericError",
    "PreconditionError",
    "ResourceError",
    "ShorConfig",
    "StateVector",
    "new_basis_state",
    "shor_factor",
]
