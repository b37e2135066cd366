"""Property suites run by ``psgames verify``.

Each check compares a fast path against an independent reference and
reports the worst discrepancy seen.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import foraging as fg
from .analysis import (
    company_family,
    detect_rc,
    derivative_check,
    foraging_family,
    necessary_condition_check,
    sweep,
)
from .company import (
    CompanyParams,
    ExpSaturating,
    Linear,
    chicken_ess,
    chicken_interval,
    chicken_matrix,
    choose_c0,
    closed_form_pi_star,
    company_game,
    exp_utility_matrix,
    expected_payoff,
    linear_utility_matrix,
    pi_star_derivative,
)
from .oracle import (
    BinomialSpec,
    brute_mean_inv_one_plus,
    brute_mean_ratio,
    company_expected_payoff,
    foraging_expected_payoffs,
)
from .solver import DEFAULT_CONFIG, SolverConfig, find_ess

P_GRID = np.round(np.arange(0, 21) * 0.05, 12)


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: Optional[float] = 0.0
    detail: str = ""

    def line(self) -> str:
        if self.worst is None:
            return self.name
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{status}  {self.name}  worst={self.worst:.3g}{extra}"


def _within(name: str, errors, tol: float) -> CheckResult:
    worst = float(max(errors, default=0.0))
    return CheckResult(name, worst <= tol, worst, f"tol={tol:g}")


def binomial_identities(max_n: int = 12) -> list:
    inv, ratio = [], []
    for n in range(0, max_n + 1):
        for p in P_GRID:
            spec = BinomialSpec(n, float(p))
            closed_inv = 1.0 if p == 0 else (1 - (1 - p) ** (n + 1)) / ((n + 1) * p)
            inv.append(abs(brute_mean_inv_one_plus(spec) - closed_inv))
            if p == 1:
                closed_ratio = n / 2
            else:
                closed_ratio = p * ((n + 1) * (1 - p) + p ** (n + 1) - 1) / ((n + 1) * (1 - p) ** 2)
            ratio.append(abs(brute_mean_ratio(spec) - closed_ratio))
    return [
        _within("E[1/(1+X)] closed form vs summation", inv, 1e-12),
        _within("E[X/(2+n-X)] closed form vs summation", ratio, 1e-12),
    ]


def foraging_suite(n: int, s: float, cfg: SolverConfig = DEFAULT_CONFIG) -> list:
    results = binomial_identities()
    gammas = [0.0, 0.3, 0.7, 1.0, 2.0]
    closed, conservation = [], []
    for g in gammas:
        params = fg.ForagingParams(n, s, g)
        for p in P_GRID:
            bp, bs = foraging_expected_payoffs(params, float(p))
            cp, cs = fg.producer_payoff(params, float(p)), fg.scrounger_payoff(params, float(p))
            closed.append(max(abs(bp - cp), abs(bs - cs)))
            found = p * params.producer_find + (1 - p) * params.scrounger_find
            conservation.append(abs(p * cp + (1 - p) * cs - found))
    results.append(_within("expected payoffs vs binomial enumeration", closed, 1e-12))
    results.append(_within("food conservation", conservation, 1e-12))

    if n >= 3:
        f = fg.threshold_curve(n, np.linspace(0, 1, 1001))
        slope = float(np.diff(f).max())
        results.append(CheckResult("threshold curve strictly decreasing", slope < 0, slope))

    if s < 1:
        ag = [fg.abundance_index(n, s, g) for g in np.linspace(0, 5, 501)]
        results.append(CheckResult("abundance index strictly increasing", bool(np.all(np.diff(ag) > 0)), 0.0))
        diffs = []
        bounds = fg.gamma_bounds(n, s)
        for g in np.round(np.arange(0, 3.0001, 0.05), 12):
            if n == 2 and abs(g - bounds.gamma_s) < 1e-9:
                continue
            params = fg.ForagingParams(n, s, float(g))
            a = fg.analytic_ess(params)
            b = find_ess(fg.foraging_game(params), cfg)
            if a.classification != b.classification and not (a.p_star is not None and b.p_star is not None):
                diffs.append(math.inf)
            else:
                diffs.append(abs(a.p_star - b.p_star))
        results.append(_within("solver vs analytic p*", diffs, 1e-8))
        table = sweep(foraging_family(n, s), 0.0, 3.0, 0.01, cfg)
        results.append(_rc_report(table))
    return results


def modified_suite(n: int, s: float, producer_keeps_all: bool = False, cfg: SolverConfig = DEFAULT_CONFIG) -> list:
    family = foraging_family(n, s, modified=True, producer_keeps_all=producer_keeps_all)
    holds = necessary_condition_check(family, list(np.linspace(0, 3, 13)))
    results = [CheckResult("producer payoff independent of others", holds)]
    table = sweep(family, 0.0, 3.0, 0.01, cfg)
    found = detect_rc(table, 1e-6)
    results.append(CheckResult("no Reverse-Correlation when producers are insensitive", not found, 0.0))
    results.append(_rc_report(table))
    return results


def company_suite(params: CompanyParams, cfg: SolverConfig = DEFAULT_CONFIG) -> list:
    results = []
    errs = []
    for g in (0.0, 0.5, 1.5, 3.0):
        pr = replace(params, gamma=g)
        for p in (0.0, 0.25, 0.5, 0.75, 1.0):
            for prod in (True, False):
                errs.append(abs(expected_payoff(pr, prod, p) - company_expected_payoff(pr, prod, p)))
    results.append(_within("expected payoff vs outcome enumeration", errs, 1e-12))

    symmetric_halves = params.p_succ == 0.5 and params.a == 0.5
    if params.n == 2 and isinstance(params.utility, ExpSaturating) and params.utility.rate == 2.0 and symmetric_halves:
        results.extend(_chicken_checks(params.s, cfg))
    if params.n == 2 and isinstance(params.utility, Linear):
        errs = []
        for g in (0.0, 0.5, 1.5, 3.0):
            m = chicken_matrix(replace(params, gamma=g))
            ref = linear_utility_matrix(g, params.s, params.c, params.p_succ, params.a)
            errs.append(max(abs(m.R - ref.R), abs(m.S - ref.S), abs(m.T - ref.T), abs(m.P - ref.P)))
        results.append(_within("linear 2x2 table vs closed form", errs, 1e-12))

    family = company_family(params.n, params.s, params.c, params.a, params.p_succ, params.utility)
    table = sweep(family, 0.0, 3.0, 0.01, cfg)
    results.append(_rc_report(table))
    return results


def _chicken_checks(s: float, cfg: SolverConfig) -> list:
    results = []
    errs = []
    for g in (0.3, 1.0, 2.0, 4.0):
        for c in (0.0, 0.05, 0.1):
            m = chicken_matrix(CompanyParams(2, g, s, c))
            ref = exp_utility_matrix(g, s, c)
            errs.append(max(abs(m.R - ref.R), abs(m.S - ref.S), abs(m.T - ref.T), abs(m.P - ref.P)))
    results.append(_within("2x2 table vs closed form", errs, 1e-12))

    gamma0, c0 = choose_c0(s)
    lo, hi = chicken_interval(s, c0, gamma0)
    results.append(CheckResult("chicken interval", lo < gamma0 < hi, 0.0, f"[{lo:.4f}, {hi:.4f}] c0={c0:.6g}"))
    pi_err, p_err, d_err, signs = [], [], [], []
    for g in np.linspace(lo, hi, 21):
        g = float(g)
        game = company_game(CompanyParams(2, g, s, c0))
        res = find_ess(game, cfg)
        exact = chicken_ess(chicken_matrix(CompanyParams(2, g, s, c0)))
        pi_err.append(abs(res.pi_star - closed_form_pi_star(g, s, c0)))
        p_err.append(abs(res.p_star - exact.p_star))
        deriv = pi_star_derivative(g, s, c0)
        d_err.append(derivative_check(lambda x: closed_form_pi_star(x, s, c0), g, deriv, 1e-6))
        signs.append(deriv)
    results.append(_within("solver pi* vs closed form", pi_err, 1e-10))
    results.append(_within("solver p* vs chicken formula", p_err, 1e-8))
    results.append(_within("pi* derivative vs finite difference", d_err, 1e-5))
    results.append(CheckResult("pi* decreasing on chicken interval", max(signs) < 0, max(signs)))
    return results


def _rc_report(table) -> CheckResult:
    found = detect_rc(table, 1e-6)
    text = "none" if not found else ", ".join(f"[{r.gamma_lo:.4g}, {r.gamma_hi:.4g}] drop={r.drop:.4g}" for r in found)
    return CheckResult("RC intervals: " + text, True, None)


def run_suite(game: str, family_params: dict, cfg: SolverConfig = DEFAULT_CONFIG) -> list:
    if game == "foraging":
        return foraging_suite(family_params["n"], family_params["s"], cfg)
    if game == "foraging-modified":
        return modified_suite(family_params["n"], family_params["s"], family_params.get("producer_keeps_all", False), cfg)
    if game == "company":
        return company_suite(CompanyParams(**family_params), cfg)
    raise ValueError(f"unknown game {game!r}")

