"""Sweeps over the production parameter and Reverse-Correlation detection.

A Reverse-Correlation (RC) interval is a range of ``gamma`` over which the
equilibrium payoff strictly decreases although every fixed-strategy payoff
grows with ``gamma``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import __version__
from .company import CompanyParams, Linear, UtilityKind, company_game
from .company import linear_threshold
from .core import EssClassification, EssResult, GameInstance
from .foraging import ForagingParams, ModifiedForagingParams, foraging_game
from .solver import DEFAULT_CONFIG, SolverConfig, SolverError, find_ess


class SweepError(RuntimeError):
    pass


class InternalError(AssertionError):
    """A proven property of the model failed to hold numerically."""


@dataclass(frozen=True)
class GameFamily:
    """Games indexed by ``gamma`` with every other parameter fixed.

    ``singular`` lists levels of ``gamma`` at which all strategies tie and no
    ESS exists.
    """

    build: Callable[[float], GameInstance]
    label: str
    params: dict = field(default_factory=dict)
    singular: tuple = ()

    def __call__(self, gamma: float) -> GameInstance:
        return self.build(gamma)


def foraging_family(n: int, s: float, modified: bool = False, producer_keeps_all: bool = False) -> GameFamily:
    if modified:
        def build(g):
            return foraging_game(ModifiedForagingParams(n, s, g, producer_keeps_all))
        ForagingParams(n, s, 0.0)  # validate eagerly
        return GameFamily(
            build,
            "foraging-modified",
            {"n": n, "s": s, "producer_keeps_all": producer_keeps_all},
        )
    ForagingParams(n, s, 0.0)
    singular = ()
    if n == 2 and s < 1:
        singular = ((1.0 + s) / (1.0 - s),)
    return GameFamily(lambda g: foraging_game(ForagingParams(n, s, g)), "foraging", {"n": n, "s": s}, singular)


def company_family(
    n: int, s: float, c: float, a: float = 0.5, p_succ: float = 0.5, utility: Optional[UtilityKind] = None
) -> GameFamily:
    base = CompanyParams(n, 0.0, s, c, a, p_succ) if utility is None else CompanyParams(n, 0.0, s, c, a, p_succ, utility)
    singular = ()
    if isinstance(base.utility, Linear) and base.p_succ * base.s * (1 - base.a) > 0:
        # with linear utility the payoff gap does not depend on p, for any n
        singular = (linear_threshold(base),)
    params = {"n": n, "s": s, "c": c, "a": a, "p_succ": p_succ, "utility": str(base.utility)}
    return GameFamily(
        lambda g: company_game(CompanyParams(n, g, s, c, a, p_succ, base.utility)),
        "company",
        params,
        singular,
    )


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    p_star: Optional[float]
    pi_star: Optional[float]
    total_production: Optional[float]
    classification: EssClassification


@dataclass
class SweepTable:
    rows: list
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        """Column as a float array, with NaN for absent values."""
        return np.array([np.nan if getattr(r, name) is None else getattr(r, name) for r in self.rows], dtype=float)

    @property
    def gammas(self) -> np.ndarray:
        return self.column("gamma")

    def row_at(self, gamma: float) -> SweepRow:
        """Row whose ``gamma`` is closest to the requested level."""
        return self.rows[int(np.argmin(np.abs(self.gammas - gamma)))]


@dataclass(frozen=True)
class RcInterval:
    gamma_lo: float
    gamma_hi: float
    drop: float


def gamma_grid(gamma_lo: float, gamma_hi: float, step: float) -> np.ndarray:
    if not (math.isfinite(gamma_lo) and math.isfinite(gamma_hi) and gamma_lo < gamma_hi):
        raise ValueError(f"need gamma_lo < gamma_hi, got [{gamma_lo}, {gamma_hi}]")
    if not (math.isfinite(step) and step > 0):
        raise ValueError(f"step must be positive, got {step}")
    count = int(math.floor((gamma_hi - gamma_lo) / step + 1e-9)) + 1
    # rounding strips accumulated binary noise such as 0.6000000000000001
    return np.round(gamma_lo + step * np.arange(count), 12)


def _near_singular(gamma: float, singular: Iterable[float], step: float) -> bool:
    # half-open window of one grid step centred on each singular level
    return any(-step / 2 <= gamma - g0 < step / 2 for g0 in singular)


def _row(gamma: float, res: EssResult) -> SweepRow:
    return SweepRow(gamma, res.p_star, res.pi_star, res.total_production, res.classification)


def sweep(
    family: GameFamily,
    gamma_lo: float,
    gamma_hi: float,
    step: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
    workers: int = 1,
) -> SweepTable:
    """Solve for the ESS at every grid level of ``gamma``.

    Rows within half a step of a singular level are recorded as
    ``Degenerate``. With ``workers > 1`` the grid is solved by a thread pool;
    row order and values do not depend on the worker count.
    """
    gammas = gamma_grid(gamma_lo, gamma_hi, step)
    singular = getattr(family, "singular", ())

    def solve(g: float) -> SweepRow:
        if _near_singular(g, singular, step):
            return _row(g, EssResult.degenerate())
        try:
            return _row(g, find_ess(family(g), cfg))
        except SolverError as exc:
            raise SweepError(f"at gamma={g!r}: {exc}") from exc

    values = [float(g) for g in gammas]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(solve, values))
    else:
        rows = [solve(g) for g in values]
    metadata = {
        "game": getattr(family, "label", repr(family)),
        "params": dict(getattr(family, "params", {})),
        "grid": {"gamma_lo": gamma_lo, "gamma_hi": gamma_hi, "step": step, "points": len(rows)},
        "solver": {"grid_points": cfg.grid_points, "root_tol": cfg.root_tol, "gap_tol": cfg.gap_tol},
        "version": __version__,
    }
    return SweepTable(rows, metadata)


def detect_rc(table: SweepTable, min_drop: float = 1e-6, field: str = "pi_star") -> list:
    """Maximal runs of rows over which ``field`` strictly decreases.

    Degenerate rows never belong to a run. Two rows separated only by
    degenerate rows are compared directly, but such a bridging step always
    forms its own run, so a jump across a singular level is reported on its
    own rather than merged with its neighbours.
    """
    if not table.rows:
        raise ValueError("empty sweep table")
    if min_drop < 0:
        raise ValueError("min_drop must be non-negative")
    idx = [i for i, r in enumerate(table.rows) if getattr(r, field) is not None and not _is_degenerate(r)]
    vals = {i: getattr(table.rows[i], field) for i in idx}

    runs = []  # (start, end) row indices
    start = end = None
    for a, b in zip(idx, idx[1:]):
        bridged = b - a > 1
        if vals[b] < vals[a]:
            if bridged:
                if start is not None:
                    runs.append((start, end))
                runs.append((a, b))
                start = end = None
            elif start is None:
                start, end = a, b
            else:
                end = b
        elif start is not None:
            runs.append((start, end))
            start = end = None
    if start is not None:
        runs.append((start, end))

    out = []
    for i, j in runs:
        drop = vals[i] - vals[j]
        if drop > 0 and drop >= min_drop:
            out.append(RcInterval(table.rows[i].gamma, table.rows[j].gamma, drop))
    return out


def _is_degenerate(row: SweepRow) -> bool:
    return row.classification is EssClassification.DEGENERATE


def necessary_condition_check(
    family: Callable[[float], GameInstance],
    gamma_samples: Sequence[float],
    p_grid_step: float = 0.01,
    tol: float = 1e-12,
) -> bool:
    """True iff the producer payoff ignores the population strategy at every
    sampled ``gamma``, which rules out Reverse-Correlation."""
    if len(gamma_samples) == 0:
        raise ValueError("need at least one gamma sample")
    grid = np.linspace(0.0, 1.0, int(round(1.0 / p_grid_step)) + 1)
    for g in gamma_samples:
        prod = np.broadcast_to(np.asarray(family(g).producer(grid), dtype=float), grid.shape)
        if prod.max() - prod.min() > tol:
            return False
    return True


def assert_no_rc(table: SweepTable, min_drop: float = 1e-6) -> None:
    """Raise InternalError if a game known to satisfy the necessary condition
    shows a decreasing equilibrium payoff."""
    found = detect_rc(table, min_drop)
    if found:
        raise InternalError(f"{table.metadata.get('game')}: RC intervals {found} despite producer-insensitive payoffs")


def derivative_check(f: Callable[[float], float], point: float, analytic: float, h: float = 1e-6) -> float:
    """Relative error of a central finite difference against ``analytic``."""
    if not h > 0:
        raise ValueError("h must be positive")
    numeric = (f(point + h) - f(point - h)) / (2 * h)
    if not (math.isfinite(numeric) and math.isfinite(analytic)):
        raise ArithmeticError(f"non-finite derivative at {point!r}")
    return abs(numeric - analytic) / max(1.0, abs(analytic))
