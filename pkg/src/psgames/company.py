"""The Company game: workers choose between costly production and free riding.

Each worker succeeds with probability ``p_succ``. A successful producer makes
a product of quality ``gamma``; a successful scrounger one of quality
``a * gamma``. Salaries are a weighted average of qualities (weight ``s`` on
one's own product) and are mapped to payoffs by a utility function, minus
the cost ``c`` paid by producers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .core import DomainError, EssClassification, EssResult, GameInstance, check_probability

ASINH_ONE = math.asinh(1.0)  # ln(1 + sqrt 2)


@dataclass(frozen=True)
class Linear:
    """Identity utility: the whole salary counts."""

    def __call__(self, x):
        return _nonneg(x)

    @property
    def is_default(self) -> bool:
        return True

    def __str__(self) -> str:
        return "linear"


@dataclass(frozen=True)
class ExpSaturating:
    """``1 - exp(-rate * x)``."""

    rate: float = 2.0

    def __post_init__(self):
        if not self.rate > 0:
            raise DomainError(f"rate must be positive, got {self.rate}")

    def __call__(self, x):
        return -np.expm1(-self.rate * _nonneg(x))

    @property
    def is_default(self) -> bool:
        return self.rate == 2.0

    def __str__(self) -> str:
        return f"exp:{self.rate!r}"


@dataclass(frozen=True)
class CappedLinear:
    """``min(cap, x)``."""

    cap: float = 1.0

    def __post_init__(self):
        if not self.cap > 0:
            raise DomainError(f"cap must be positive, got {self.cap}")

    def __call__(self, x):
        return np.minimum(self.cap, _nonneg(x))

    @property
    def is_default(self) -> bool:
        return self.cap == 1.0

    def __str__(self) -> str:
        return f"cap:{self.cap!r}"


UtilityKind = Union[Linear, ExpSaturating, CappedLinear]


def _nonneg(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f"salaries are non-negative, got {x!r}")
    return arr


def parse_utility(text: str) -> UtilityKind:
    """Parse ``linear``, ``exp[:RATE]`` or ``cap[:CAP]``."""
    kind, _, arg = text.strip().partition(":")
    try:
        if kind == "linear" and not arg:
            return Linear()
        if kind == "exp":
            return ExpSaturating(float(arg)) if arg else ExpSaturating()
        if kind == "cap":
            return CappedLinear(float(arg)) if arg else CappedLinear()
    except ValueError as exc:
        raise DomainError(f"bad utility {text!r}: {exc}") from None
    raise DomainError(f"unknown utility {text!r}; expected linear, exp:RATE or cap:CAP")


def utility_eval(kind: UtilityKind, x):
    out = kind(x)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class CompanyParams:
    n: int
    gamma: float
    s: float
    c: float
    a: float = 0.5
    p_succ: float = 0.5
    utility: UtilityKind = field(default_factory=ExpSaturating)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise DomainError(f"gamma must be finite and >= 0, got {self.gamma!r}")
        if not 1.0 / self.n - 1e-12 <= self.s <= 1.0:
            raise DomainError(f"s must lie in [1/n, 1], got {self.s!r}")
        if not (math.isfinite(self.c) and self.c >= 0):
            raise DomainError(f"cost c must be finite and >= 0, got {self.c!r}")
        if not 0.0 <= self.a < 1.0:
            raise DomainError(f"scrounger quality factor a must lie in [0, 1), got {self.a!r}")
        check_probability(self.p_succ, "p_succ")


@dataclass(frozen=True)
class ChickenMatrix:
    R: float
    S: float
    T: float
    P: float


class ChickenOrderingError(ValueError):
    pass


class _PayoffPolynomial:
    """Expected utility as ``sum_k C_k p**i_k (1-p)**j_k``.

    ``i``/``j`` count co-players who succeed as producers/scroungers; the
    utility values do not depend on ``p`` and are computed once.
    """

    def __init__(self, params: CompanyParams, focal_is_producer: bool):
        n, g, s, ps = params.n, params.gamma, params.s, params.p_succ
        others = n - 1
        w = (1.0 - s) / others
        own = g if focal_is_producer else params.a * g
        i_list, j_list, coef = [], [], []
        for i in range(others + 1):
            for j in range(others - i + 1):
                k = others - i - j
                mult = math.factorial(others) // (math.factorial(i) * math.factorial(j) * math.factorial(k))
                weight = mult * ps ** (i + j) * (1.0 - ps) ** k
                if weight == 0.0:
                    continue
                pool = w * (i * g + j * params.a * g)
                value = ps * params.utility(s * own + pool) + (1.0 - ps) * params.utility(pool)
                i_list.append(i)
                j_list.append(j)
                coef.append(weight * float(value))
        self.i = np.array(i_list)
        self.j = np.array(j_list)
        self.coef = np.array(coef)
        self.cost = params.c if focal_is_producer else 0.0

    def __call__(self, p):
        check_probability(p)
        p_arr = np.asarray(p, dtype=float)[..., None]
        out = (self.coef * p_arr**self.i * (1.0 - p_arr) ** self.j).sum(axis=-1) - self.cost
        return float(out) if np.ndim(p) == 0 else out


def expected_payoff(params: CompanyParams, focal_is_producer: bool, p):
    """Exact expected payoff of a pure strategy against population ``p``."""
    return _PayoffPolynomial(params, focal_is_producer)(p)


def total_production(params: CompanyParams, p):
    """Expected summed quality when every worker produces with probability ``p``."""
    return params.n * params.p_succ * params.gamma * (p + (1.0 - p) * params.a)


def company_game(params: CompanyParams) -> GameInstance:
    return GameInstance(
        producer=_PayoffPolynomial(params, True),
        scrounger=_PayoffPolynomial(params, False),
        label=(
            f"company(n={params.n}, gamma={params.gamma!r}, s={params.s!r}, c={params.c!r}, "
            f"a={params.a!r}, p_succ={params.p_succ!r}, utility={params.utility})"
        ),
        production=lambda p: total_production(params, p),
    )


def chicken_matrix(params: CompanyParams) -> ChickenMatrix:
    """Two-player payoff table: R, S for a producer and T, P for a scrounger,
    against a producer and a scrounger respectively."""
    if params.n != 2:
        raise DomainError(f"the 2x2 payoff table needs n = 2, got n = {params.n}")
    prod = _PayoffPolynomial(params, True)
    scr = _PayoffPolynomial(params, False)
    return ChickenMatrix(R=prod(1.0), S=prod(0.0), T=scr(1.0), P=scr(0.0))


def exp_utility_matrix(gamma: float, s: float, c: float) -> ChickenMatrix:
    """Closed-form table for ``1 - exp(-2x)`` utility and ``p_succ = a = 1/2``.

    Valid for any ``s`` (not only ``s >= 1/2``), which the cost selection
    below relies on.
    """
    e = math.exp
    R = 0.25 * (3 - e(-2 * gamma) - e(-2 * s * gamma) - e(-2 * (1 - s) * gamma)) - c
    S = 0.25 * (3 - e(-(1 + s) * gamma) - e(-2 * s * gamma) - e(-(1 - s) * gamma)) - c
    T = 0.25 * (3 - e(-(2 - s) * gamma) - e(-s * gamma) - e(-2 * (1 - s) * gamma))
    P = 0.25 * (3 - e(-gamma) - e(-s * gamma) - e(-(1 - s) * gamma))
    return ChickenMatrix(R, S, T, P)


def linear_utility_matrix(gamma: float, s: float, c: float, p_succ: float, a: float) -> ChickenMatrix:
    """Closed-form table for linear utility."""
    return ChickenMatrix(
        R=p_succ * gamma - c,
        S=p_succ * gamma * (s + a - s * a) - c,
        T=p_succ * gamma * (1 - s + s * a),
        P=p_succ * a * gamma,
    )


def linear_threshold(params: CompanyParams) -> float:
    """Quality level at which both strategies tie under linear utility."""
    if not isinstance(params.utility, Linear):
        raise DomainError("the tie threshold is only defined for linear utility")
    denom = params.p_succ * params.s * (1.0 - params.a)
    if denom <= 0:
        raise DomainError("p_succ * s * (1 - a) must be positive")
    return params.c / denom


def check_chicken_order(m: ChickenMatrix) -> None:
    for lhs, rhs in (("T", "R"), ("R", "S"), ("S", "P")):
        if not getattr(m, lhs) > getattr(m, rhs):
            raise ChickenOrderingError(
                f"chicken ordering T>R>S>P violated: {lhs}>{rhs} fails "
                f"({lhs}={getattr(m, lhs)!r}, {rhs}={getattr(m, rhs)!r})"
            )


def matrix_game(m: ChickenMatrix, label: str = "") -> GameInstance:
    """The 2-player game defined by a payoff table."""
    return GameInstance(
        producer=lambda p: p * m.R + (1.0 - p) * m.S,
        scrounger=lambda p: p * m.T + (1.0 - p) * m.P,
        label=label or f"matrix(R={m.R!r}, S={m.S!r}, T={m.T!r}, P={m.P!r})",
    )


def chicken_ess(m: ChickenMatrix) -> EssResult:
    """Mixed equilibrium of a game of chicken, in closed form."""
    check_chicken_order(m)
    denom = m.S + m.T - m.R - m.P
    return EssResult(
        EssClassification.INTERIOR,
        p_star=(m.S - m.P) / denom,
        pi_star=(m.S * m.T - m.R * m.P) / denom,
    )


def _check_positive_product(gamma: float, s: float) -> None:
    if s * gamma == 0:
        raise DomainError("s * gamma must be non-zero")


def closed_form_pi_star(gamma: float, s: float, c0: float) -> float:
    """Equilibrium payoff ``1 - c0 e^{s gamma} coth(s gamma / 2)`` on the
    chicken interval of the two-worker exponential-utility game."""
    _check_positive_product(gamma, s)
    x = s * gamma
    return 1.0 - c0 * math.exp(x) / math.tanh(x / 2.0)


def pi_star_derivative(gamma: float, s: float, c0: float) -> float:
    """Derivative of :func:`closed_form_pi_star` with respect to ``gamma``."""
    _check_positive_product(gamma, s)
    x = s * gamma
    return c0 * s * math.exp(x) / 2.0 * (1.0 - math.sinh(x)) / math.sinh(x / 2.0) ** 2


def choose_c0(s: float) -> tuple[float, float]:
    """Pick a quality level and a cost making the two-worker game a chicken game.

    The level is ``max(1, asinh(1)/s) + 1/2``, past the point where the
    equilibrium payoff starts decreasing. The cost is the midpoint of the
    open interval ``(R - T, S - P)`` evaluated at zero cost.
    """
    if not 0.0 < s < 1.0:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    gamma0 = max(1.0, ASINH_ONE / s) + 0.5
    m = exp_utility_matrix(gamma0, s, 0.0)
    lo, hi = m.R - m.T, m.S - m.P
    if not 0.0 < lo < hi:
        raise AssertionError(f"empty admissible cost interval ({lo!r}, {hi!r}) at s={s!r}")
    return gamma0, 0.5 * (lo + hi)


def chicken_interval(s: float, c0: float, gamma0: float, step: float = 1e-3, span: float = 50.0) -> tuple[float, float]:
    """Grid-verified interval around ``gamma0`` where T>R>S>P holds and the
    quality level exceeds ``max(1, asinh(1)/s)``.

    Expands outward from ``gamma0`` one ``step`` at a time and returns the
    last grid points at which the ordering still held.
    """
    floor = max(1.0, ASINH_ONE / s)

    def ok(g):
        m = exp_utility_matrix(g, s, c0)
        return g > floor and m.T > m.R > m.S > m.P

    if not ok(gamma0):
        raise ChickenOrderingError(f"ordering fails at gamma0={gamma0!r}")
    lo = hi = gamma0
    k = 1
    while k * step <= span and ok(gamma0 - k * step):
        lo = gamma0 - k * step
        k += 1
    k = 1
    while k * step <= span and ok(gamma0 + k * step):
        hi = gamma0 + k * step
        k += 1
    return lo, hi
