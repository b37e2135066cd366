"""Symmetric two-strategy games and the bilinear mixed-payoff rule.

A game is described by the expected payoffs of the two pure strategies
(producer and scrounger) against a population in which every other player
produces with probability ``p``. Everything else, including the payoff of a
mixed strategy ``q``, follows by linearity.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

PayoffFn = Callable[[np.ndarray], np.ndarray]


class DomainError(ValueError):
    """An argument lies outside the domain of the model."""


def check_probability(x, name: str = "p"):
    """Raise DomainError unless every entry of ``x`` lies in [0, 1]."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {x!r}")
    return x


@dataclass(frozen=True)
class MixedStrategy:
    """Probability of playing producer."""

    p: float

    def __post_init__(self):
        check_probability(self.p)


class EssClassification(str, enum.Enum):
    ALL_PRODUCER = "AllProducer"
    ALL_SCROUNGER = "AllScrounger"
    INTERIOR = "Interior"
    DEGENERATE = "Degenerate"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EssResult:
    """Outcome of an equilibrium computation.

    ``p_star`` and ``pi_star`` are ``None`` exactly when no ESS exists
    (``Degenerate``). ``total_production`` is ``None`` also when the game
    does not define a production measure.
    """

    classification: EssClassification
    p_star: Optional[float] = None
    pi_star: Optional[float] = None
    total_production: Optional[float] = None

    def __post_init__(self):
        degenerate = self.classification is EssClassification.DEGENERATE
        if degenerate and (self.p_star is not None or self.pi_star is not None):
            raise ValueError("a Degenerate result carries no equilibrium")
        if not degenerate and (self.p_star is None or self.pi_star is None):
            raise ValueError(f"{self.classification} result needs p_star and pi_star")
        if self.classification is EssClassification.INTERIOR and not 0.0 < self.p_star < 1.0:
            raise ValueError(f"interior ESS must lie in (0, 1), got {self.p_star}")

    @property
    def is_degenerate(self) -> bool:
        return self.classification is EssClassification.DEGENERATE

    @classmethod
    def degenerate(cls) -> "EssResult":
        return cls(EssClassification.DEGENERATE)

    @classmethod
    def from_p(cls, game: "GameInstance", p_star: float) -> "EssResult":
        """Build the result for a known equilibrium probability."""
        if p_star >= 1.0:
            kind, p_star = EssClassification.ALL_PRODUCER, 1.0
        elif p_star <= 0.0:
            kind, p_star = EssClassification.ALL_SCROUNGER, 0.0
        else:
            kind = EssClassification.INTERIOR
        return cls(
            kind,
            p_star=p_star,
            pi_star=mixed_payoff(game, p_star, p_star),
            total_production=game.total_production(p_star),
        )


@dataclass(frozen=True)
class GameInstance:
    """A symmetric producer/scrounger game with all parameters bound.

    Parameters
    ----------
    producer, scrounger : callable
        Expected payoff of a pure producer (resp. scrounger) when each of the
        other players produces with probability ``p``. Must accept floats
        and numpy arrays.
    label : str
        Short human-readable identifier of the family and parameters.
    production : callable, optional
        Expected total production when everyone plays ``p``.
    """

    producer: PayoffFn
    scrounger: PayoffFn
    label: str = ""
    production: Optional[PayoffFn] = None

    def payoff(self, q, p):
        return q * self.producer(p) + (1.0 - q) * self.scrounger(p)

    def gap(self, p):
        return self.producer(p) - self.scrounger(p)

    def total_production(self, p: float) -> Optional[float]:
        if self.production is None:
            return None
        return float(self.production(p))


def mixed_payoff(game: GameInstance, q: float, p: float) -> float:
    """Expected payoff of playing producer w.p. ``q`` against population ``p``."""
    check_probability(q, "q")
    check_probability(p, "p")
    return float(game.payoff(q, p))


def payoff_gap(game: GameInstance, p: float) -> float:
    """Producer minus scrounger payoff at population strategy ``p``."""
    check_probability(p)
    return float(game.gap(p))
