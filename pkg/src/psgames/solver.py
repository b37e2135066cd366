"""Numerical ESS search for symmetric producer/scrounger games.

The payoff gap ``h(p) = pi(1, p) - pi(0, p)`` is sampled on a uniform grid.
A single sign change from positive to negative, refined by bisection, gives
the unique interior ESS; a gap of constant sign gives a pure ESS.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import EssResult, GameInstance, check_probability

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    pass


class MultipleCrossingsError(SolverError):
    """The payoff gap changes sign more than once (or from - to +)."""


class NonFiniteEvaluationError(SolverError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    grid_points: int = 2001
    root_tol: float = 1e-10
    gap_tol: float = 1e-9

    def __post_init__(self):
        if self.grid_points < 3:
            raise ValueError(f"grid_points must be >= 3, got {self.grid_points}")
        if not (self.root_tol > 0 and self.gap_tol > 0):
            raise ValueError("tolerances must be positive")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.grid_points)


DEFAULT_CONFIG = SolverConfig()


def _gap_on_grid(game: GameInstance, grid: np.ndarray) -> np.ndarray:
    h = np.asarray(game.gap(grid), dtype=float)
    if h.shape != grid.shape:
        h = np.broadcast_to(h, grid.shape)
    if not np.all(np.isfinite(h)):
        bad = grid[~np.isfinite(h)][0]
        raise NonFiniteEvaluationError(f"{game.label}: payoff gap is not finite at p={bad!r}")
    return h


def _bisect(game: GameInstance, lo: float, hi: float, tol: float) -> float:
    # invariant: gap(lo) > 0 >= gap(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if game.gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_ess(game: GameInstance, cfg: SolverConfig = DEFAULT_CONFIG) -> EssResult:
    """Locate the unique ESS of ``game``.

    Raises
    ------
    MultipleCrossingsError
        If the gap is not single-crossing from above, in which case the
        sufficient conditions for a unique ESS do not hold.
    NonFiniteEvaluationError
        If a payoff evaluates to NaN or infinity.
    """
    grid = cfg.grid
    h = _gap_on_grid(game, grid)
    tol = cfg.gap_tol

    if np.all(np.abs(h) <= tol):
        return EssResult.degenerate()

    # sign pattern ignoring near-zero noise; must read + ... + - ... -
    significant = np.sign(h[np.abs(h) > tol])
    if np.any(np.diff(significant) > 0):
        raise MultipleCrossingsError(f"{game.label}: payoff gap increases through zero")

    positive = h > 0
    if positive.all():
        return EssResult.from_p(game, 1.0)
    if not positive.any():
        return EssResult.from_p(game, 0.0)
    last = int(np.flatnonzero(positive)[-1])
    p_star = _bisect(game, float(grid[last]), float(grid[last + 1]), cfg.root_tol)
    if p_star >= 1.0 - cfg.root_tol:
        p_star = 1.0
    elif p_star <= cfg.root_tol:
        p_star = 0.0
    return EssResult.from_p(game, p_star)


def check_ess(game: GameInstance, p_star: float, cfg: SolverConfig = DEFAULT_CONFIG) -> Optional[str]:
    """Return ``None`` if ``p_star`` passes the sufficient ESS conditions on
    the grid, otherwise a description of the first violated condition."""
    check_probability(p_star, "p_star")
    h_star = float(game.gap(p_star))
    at_root = abs(h_star) <= cfg.gap_tol
    if not at_root:
        if p_star == 1.0 and h_star > 0:
            pass
        elif p_star == 0.0 and h_star < 0:
            pass
        else:
            return f"(i) payoff gap at p*={p_star!r} is {h_star!r}, not zero"
    grid = cfg.grid
    h = _gap_on_grid(game, grid)
    # grid points within the root tolerance of p* carry no sign information
    margin = 10 * cfg.root_tol
    below = (grid < p_star - margin) & (h <= 0)
    if np.any(below):
        q = grid[below][0]
        return f"(ii) producer not strictly better at q={q!r} < p*"
    above = (grid > p_star + margin) & (h >= 0)
    if np.any(above):
        q = grid[above][0]
        return f"(iii) scrounger not strictly better at q={q!r} > p*"
    return None


def verify_ess(game: GameInstance, p_star: float, cfg: SolverConfig = DEFAULT_CONFIG) -> bool:
    reason = check_ess(game, p_star, cfg)
    if reason is not None:
        log.debug("%s: %s", game.label, reason)
    return reason is None
