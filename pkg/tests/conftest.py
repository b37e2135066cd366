import pytest

from psgames.company import ChickenMatrix, CompanyParams, Linear, company_game, matrix_game
from psgames.core import GameInstance
from psgames.foraging import ForagingParams, foraging_game


@pytest.fixture
def textbook_chicken():
    return matrix_game(ChickenMatrix(R=3.0, S=1.0, T=4.0, P=0.0))


@pytest.fixture
def flat_game():
    return GameInstance(lambda p: 0.0 * p + 1.0, lambda p: 0.0 * p + 1.0, "flat")


@pytest.fixture
def linear_company_params():
    return CompanyParams(2, 1.0, 0.7, 0.25, 0.5, 0.5, Linear())


def shipped_games():
    """A spread of instances from both games, used by the property tests."""
    games = []
    for n, s, g in [(2, 0.5, 1.0), (3, 0.4, 1.0), (4, 0.4, 0.7), (6, 0.2, 2.0)]:
        games.append(foraging_game(ForagingParams(n, s, g)))
    for n, s, c in [(2, 0.6, 0.07), (4, 0.6, 0.15), (3, 0.5, 0.0)]:
        games.append(company_game(CompanyParams(n, 1.5, s, c)))
    games.append(company_game(CompanyParams(2, 1.5, 0.7, 0.25, utility=Linear())))
    return games
