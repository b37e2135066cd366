"""The Foraging game and its modified variant.

Producers find ``1 + gamma`` calories, scroungers find ``gamma``. A finder
eats a share ``s`` of its find; the rest is split evenly between the finder
and every scrounger. In the modified variant the producer's fallen food is
split among scroungers only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import DomainError, EssResult, GameInstance, check_probability


@dataclass(frozen=True)
class ForagingParams:
    n: int
    s: float
    gamma: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"group size n must be an integer >= 2, got {self.n!r}")
        if not 0.0 <= self.s <= 1.0:
            raise DomainError(f"finder's share s must lie in [0, 1], got {self.s!r}")
        if not (math.isfinite(self.gamma) and self.gamma >= 0.0):
            raise DomainError(f"gamma must be finite and >= 0, got {self.gamma!r}")

    @property
    def producer_find(self) -> float:
        return 1.0 + self.gamma

    @property
    def scrounger_find(self) -> float:
        return self.gamma


@dataclass(frozen=True)
class ModifiedForagingParams(ForagingParams):
    """Parameters of the variant where producers do not eat fallen food.

    By default a producer eats its finder's share ``s * (1 + gamma)``. Set
    ``producer_keeps_all`` to make the producer payoff ``1 + gamma`` instead.
    Both readings are constant in the population strategy.
    """

    producer_keeps_all: bool = False


@dataclass(frozen=True)
class GammaBounds:
    gamma1: float
    gamma2: float
    gamma_s: Optional[float] = None


def _polyval(coeffs, p):
    # coeffs in increasing degree
    return np.polynomial.polynomial.polyval(p, coeffs)


def pure_payoffs_given_k(params: ForagingParams, k: int) -> tuple[float, float]:
    """Producer and scrounger payoffs when exactly ``k`` players produce."""
    n, s = params.n, params.s
    if int(k) != k or not 0 <= k <= n:
        raise DomainError(f"k must be an integer in [0, {n}], got {k!r}")
    fp, fs = params.producer_find, params.scrounger_find
    fallen = (1.0 - s) * fp / (1 + n - k)
    return s * fp + fallen, fs + k * fallen


def producer_payoff(params: ForagingParams, p):
    """Expected producer payoff when the others produce with probability ``p``.

    Uses ``(1 - p**n) / (1 - p) = sum_{k<n} p**k``, which is exact at ``p = 1``
    where it gives the continuous extension ``1 + gamma``.
    """
    check_probability(p)
    n, s, fp = params.n, params.s, params.producer_find
    return s * fp + (1.0 - s) * fp * _polyval(np.ones(n), p) / n


def scrounger_payoff(params: ForagingParams, p):
    """Expected scrounger payoff when the others produce with probability ``p``."""
    check_probability(p)
    n, s = params.n, params.s
    # (n(1-p) + p**n - 1) / (1-p)**2 == sum_{j<n-1} (n-1-j) p**j
    coeffs = np.arange(n - 1, 0, -1, dtype=float)
    return params.scrounger_find + (1.0 - s) * params.producer_find * p * _polyval(coeffs, p) / n


def threshold_curve(n: int, p):
    """The indifference curve: producing beats scrounging iff this exceeds
    :func:`abundance_index`.

    Equal to ``((1 - p**n) / (1 - p) - n p) / (1 - p)``, extended by
    continuity to ``-n(n-3)/2`` at ``p = 1``. Identically 1 for ``n = 2`` and
    strictly decreasing for ``n >= 3``.
    """
    check_probability(p)
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if n == 2:
        return np.ones_like(p, dtype=float) if np.ndim(p) else 1.0
    return 1.0 - p * _polyval(np.arange(n - 2, 0, -1, dtype=float), p)


def abundance_index(n: int, s: float, gamma: float) -> float:
    """``n (1 - 1/((1-s)(1+gamma)))``, strictly increasing in ``gamma``.

    Defined for ``gamma > -1``; values below zero are only meaningful as an
    analytic continuation of the game.
    """
    if s >= 1.0:
        raise DomainError("abundance index is undefined for s = 1")
    if gamma <= -1.0:
        raise DomainError(f"gamma must exceed -1, got {gamma}")
    return n * (1.0 - 1.0 / ((1.0 - s) * (1.0 + gamma)))


def gamma_bounds(n: int, s: float) -> GammaBounds:
    """Abundance levels bracketing the mixed-equilibrium regime."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if not 0.0 <= s < 1.0:
        raise DomainError(f"s must lie in [0, 1), got {s}")
    g1 = 2.0 / ((n - 1) * (1.0 - s)) - 1.0
    g2 = n / ((n - 1) * (1.0 - s)) - 1.0
    if n == 2:
        gs = (1.0 + s) / (1.0 - s)
        return GammaBounds(gs, gs, gs)
    return GammaBounds(g1, g2)


def invert_threshold(n: int, level: float, tol: float = 1e-12) -> float:
    """Solve ``threshold_curve(n, p) == level`` for ``p`` by bisection.

    Requires ``n >= 3`` (strict monotonicity). Levels outside the range of the
    curve are clamped to the matching endpoint.
    """
    if n < 3:
        raise DomainError("the threshold curve is only invertible for n >= 3")
    lo, hi = 0.0, 1.0
    if level >= threshold_curve(n, lo):
        return 0.0
    if level <= threshold_curve(n, hi):
        return 1.0
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if threshold_curve(n, mid) > level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def total_food(params: ForagingParams, p):
    """Expected food found by the whole group when everyone plays ``p``."""
    return params.n * (p * params.producer_find + (1.0 - p) * params.scrounger_find)


def foraging_game(params: ForagingParams) -> GameInstance:
    if isinstance(params, ModifiedForagingParams):
        return modified_foraging_game(params)
    return GameInstance(
        producer=lambda p: producer_payoff(params, p),
        scrounger=lambda p: scrounger_payoff(params, p),
        label=f"foraging(n={params.n}, s={params.s!r}, gamma={params.gamma!r})",
        production=lambda p: total_food(params, p),
    )


def analytic_ess(params: ForagingParams) -> EssResult:
    """Equilibrium of the Foraging game from the threshold characterization.

    Below ``gamma1`` everyone produces, above ``gamma2`` everyone scrounges,
    and in between (``n >= 3``) the equilibrium solves
    ``threshold_curve(p) == abundance_index(gamma)``. For ``n = 2`` the single
    critical level ``gamma_s`` has no ESS.
    """
    n, s, gamma = params.n, params.s, params.gamma
    if s >= 1.0:
        raise DomainError("analytic ESS requires s < 1")
    game = foraging_game(params)
    bounds = gamma_bounds(n, s)
    if gamma < bounds.gamma1:
        return EssResult.from_p(game, 1.0)
    if gamma > bounds.gamma2:
        return EssResult.from_p(game, 0.0)
    if n == 2:
        return EssResult.degenerate()
    p_star = invert_threshold(n, abundance_index(n, s, gamma))
    return EssResult.from_p(game, p_star)


def modified_producer_payoff(params: ModifiedForagingParams, p):
    check_probability(p)
    value = params.producer_find
    if not params.producer_keeps_all:
        value *= params.s
    return np.full(np.shape(p), value) if np.ndim(p) else value


def modified_scrounger_payoff(params: ModifiedForagingParams, p):
    """Scrounger payoff when fallen producer food goes to scroungers only.

    With ``Y ~ Binomial(n-1, p)`` producers among the others, the focal
    scrounger shares each producer's fallen food with the other ``n-1-Y``
    scroungers, so the payoff is ``gamma + (1-s)(1+gamma) E[Y / (n-Y)]``.
    """
    check_probability(p)
    n, s = params.n, params.s
    p_arr = np.asarray(p, dtype=float)
    ratio = np.zeros_like(p_arr)
    for y in range(1, n):
        ratio = ratio + math.comb(n - 1, y) * p_arr**y * (1.0 - p_arr) ** (n - 1 - y) * y / (n - y)
    out = params.scrounger_find + (1.0 - s) * params.producer_find * ratio
    return float(out) if np.ndim(p) == 0 else out


def modified_foraging_game(params: ModifiedForagingParams) -> GameInstance:
    return GameInstance(
        producer=lambda p: modified_producer_payoff(params, p),
        scrounger=lambda p: modified_scrounger_payoff(params, p),
        label=(
            f"foraging-modified(n={params.n}, s={params.s!r}, gamma={params.gamma!r}, "
            f"producer_keeps_all={params.producer_keeps_all})"
        ),
        production=lambda p: total_food(params, p),
    )
