"""Brute-force reference computations.

Nothing here calls the closed forms or the solver it is meant to check:
expectations are direct sums over outcomes, and convergence is checked by
simulating a simple adaptive dynamics.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .company import CompanyParams
from .core import GameInstance, check_probability
from .foraging import ForagingParams, pure_payoffs_given_k


@dataclass(frozen=True)
class BinomialSpec:
    trials: int
    success_prob: float

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 0:
            raise ValueError(f"trials must be a non-negative integer, got {self.trials!r}")
        check_probability(self.success_prob, "success_prob")

    def pmf(self) -> list:
        n, p = self.trials, self.success_prob
        return [math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(n + 1)]


def brute_mean_inv_one_plus(spec: BinomialSpec) -> float:
    """E[1 / (1 + X)] for X ~ Binomial, by summation."""
    return math.fsum(w / (1 + k) for k, w in enumerate(spec.pmf()))


def brute_mean_ratio(spec: BinomialSpec) -> float:
    """E[X / (2 + n - X)] for X ~ Binomial(n, p), by summation."""
    n = spec.trials
    return math.fsum(w * k / (2 + n - k) for k, w in enumerate(spec.pmf()))


def foraging_expected_payoffs(params: ForagingParams, p: float) -> tuple[float, float]:
    """(producer, scrounger) expected payoffs summed over the number of
    producers among the other ``n - 1`` players."""
    n = params.n
    prod = scr = 0.0
    for y, w in enumerate(BinomialSpec(n - 1, p).pmf()):
        prod += w * pure_payoffs_given_k(params, y + 1)[0]
        scr += w * pure_payoffs_given_k(params, y)[1]
    return prod, scr


def company_expected_payoff(params: CompanyParams, focal_is_producer: bool, p: float) -> float:
    """Expected payoff by enumerating every joint outcome of the workers."""
    g, a, ps = params.gamma, params.a, params.p_succ
    others = [(g, p * ps), (a * g, (1 - p) * ps), (0.0, 1 - ps)]
    own_quality = g if focal_is_producer else a * g
    own = [(own_quality, ps), (0.0, 1 - ps)]
    w = (1 - params.s) / (params.n - 1)
    total = 0.0
    for mine in own:
        for combo in itertools.product(others, repeat=params.n - 1):
            prob = mine[1] * math.prod(o[1] for o in combo)
            if prob == 0.0:
                continue
            salary = params.s * mine[0] + w * sum(o[0] for o in combo)
            total += prob * float(params.utility(salary))
    return total - (params.c if focal_is_producer else 0.0)


def best_response_set(game: GameInstance, p: float, grid: int = 101, tol: float = 1e-9) -> set:
    """Grid values of ``q`` maximizing the payoff against population ``p``.

    Payoffs within ``tol`` of the maximum count as maximal.
    """
    if grid < 2:
        raise ValueError("grid must have at least 2 points")
    qs = [i / (grid - 1) for i in range(grid)]
    values = [float(game.payoff(q, p)) for q in qs]
    best = max(values)
    return {q for q, v in zip(qs, values) if v >= best - tol}


def adaptive_dynamics(game: GameInstance, p0: float, eta: float = 0.01, steps: int = 10_000) -> float:
    """Iterate ``p <- clip(p + eta * gap(p), 0, 1)`` and return the final ``p``."""
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    check_probability(p0, "p0")
    p = p0
    for _ in range(steps):
        p = min(1.0, max(0.0, p + eta * float(game.gap(p))))
    return p


def monte_carlo_modified_scrounger(params: ForagingParams, p: float, samples: int, rng: np.random.Generator):
    """Simulate the focal scrounger's intake in the modified foraging game.

    Each round draws the other players' roles; every finder eats its share
    ``s`` and its fallen food is split among the scroungers (producers
    excluded). Returns the sample mean and its standard error.
    """
    n, s, g = params.n, params.s, params.gamma
    roles = rng.random((samples, n - 1)) < p  # True = producer
    producers = roles.sum(axis=1)
    scroungers = n - producers  # focal player included
    fallen = producers * (1 - s) * (1 + g) + scroungers * (1 - s) * g
    intake = s * g + fallen / scroungers
    return float(intake.mean()), float(intake.std(ddof=1) / math.sqrt(samples))
