import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psgames.core import (
    DomainError,
    EssClassification,
    EssResult,
    MixedStrategy,
    mixed_payoff,
    payoff_gap,
)
from psgames.company import CompanyParams, CappedLinear, Linear, company_game, linear_threshold
from psgames.foraging import ForagingParams, foraging_game

from conftest import shipped_games

probability = st.floats(0.0, 1.0)


def test_pure_endpoints_are_exact(textbook_chicken):
    g = textbook_chicken
    assert mixed_payoff(g, 1.0, 0.3) == g.producer(0.3)
    assert mixed_payoff(g, 0.0, 0.3) == g.scrounger(0.3)


def test_chicken_mixed_payoff(textbook_chicken):
    assert mixed_payoff(textbook_chicken, 0.5, 1.0) == pytest.approx(3.5, abs=1e-15)


@pytest.mark.parametrize("q, p", [(-0.1, 0.5), (0.5, 1.1), (np.nan, 0.2)])
def test_mixed_payoff_rejects_out_of_range(textbook_chicken, q, p):
    with pytest.raises(DomainError):
        mixed_payoff(textbook_chicken, q, p)


def test_gap_sign_in_two_player_foraging():
    assert payoff_gap(foraging_game(ForagingParams(2, 0.5, 1.0)), 0.5) > 0
    assert payoff_gap(foraging_game(ForagingParams(2, 0.5, 4.0)), 0.5) < 0
    with pytest.raises(DomainError):
        payoff_gap(foraging_game(ForagingParams(2, 0.5, 1.0)), 1.5)


def test_gap_vanishes_for_linear_company_at_tie_level():
    base = CompanyParams(4, 0.0, 0.6, 0.15, utility=Linear())
    game = company_game(CompanyParams(4, linear_threshold(base), 0.6, 0.15, utility=Linear()))
    for p in np.linspace(0, 1, 11):
        assert abs(payoff_gap(game, p)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(q=probability, p=probability)
def test_bilinearity(q, p):
    for game in shipped_games():
        direct = game.payoff(q, p)
        expanded = q * game.producer(p) + (1 - q) * game.scrounger(p)
        assert abs(direct - expanded) <= 1e-12


@pytest.mark.parametrize("game", shipped_games(), ids=lambda g: g.label)
def test_payoffs_non_decreasing_in_population(game):
    grid = np.linspace(0, 1, 101)
    for q in (0.0, 0.3, 1.0):
        values = game.payoff(q, grid)
        assert np.all(np.diff(values) >= -1e-12)


@pytest.mark.parametrize(
    "build",
    [
        lambda g: foraging_game(ForagingParams(3, 0.4, g)),
        lambda g: foraging_game(ForagingParams(5, 0.1, g)),
        lambda g: company_game(CompanyParams(4, g, 0.6, 0.15)),
        lambda g: company_game(CompanyParams(2, g, 0.7, 0.25, utility=Linear())),
        lambda g: company_game(CompanyParams(3, g, 0.7, 0.15, utility=CappedLinear())),
    ],
)
def test_payoffs_non_decreasing_in_gamma(build):
    gammas = np.linspace(0, 4, 41)
    for q in (0.0, 0.5, 1.0):
        for p in (0.0, 0.4, 1.0):
            values = [build(g).payoff(q, p) for g in gammas]
            assert np.all(np.diff(values) >= -1e-12)


def test_mixed_strategy_validates():
    assert MixedStrategy(0.25).p == 0.25
    with pytest.raises(DomainError):
        MixedStrategy(1.5)


def test_result_invariants():
    assert EssResult.degenerate().is_degenerate
    with pytest.raises(ValueError):
        EssResult(EssClassification.DEGENERATE, p_star=0.5, pi_star=1.0)
    with pytest.raises(ValueError):
        EssResult(EssClassification.INTERIOR, p_star=None, pi_star=1.0)
    with pytest.raises(ValueError):
        EssResult(EssClassification.INTERIOR, p_star=1.0, pi_star=1.0)


def test_result_from_boundary_probability(textbook_chicken):
    assert EssResult.from_p(textbook_chicken, 1.0).classification is EssClassification.ALL_PRODUCER
    assert EssResult.from_p(textbook_chicken, 0.0).classification is EssClassification.ALL_SCROUNGER
    res = EssResult.from_p(textbook_chicken, 0.5)
    assert res.classification is EssClassification.INTERIOR
    assert res.total_production is None
