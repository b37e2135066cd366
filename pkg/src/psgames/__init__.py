"""Evolutionarily stable strategies of producer/scrounger games."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    DomainError,
    EssClassification,
    EssResult,
    GameInstance,
    MixedStrategy,
    mixed_payoff,
    payoff_gap,
)
from .solver import SolverConfig, find_ess, verify_ess  # noqa: E402

__all__ = [
    "DomainError",
    "EssClassification",
    "EssResult",
    "GameInstance",
    "MixedStrategy",
    "SolverConfig",
    "find_ess",
    "mixed_payoff",
    "payoff_gap",
    "verify_ess",
]
