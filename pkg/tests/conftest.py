"""Shared games, scenarios and random-game helpers."""

from fractions import Fraction

import numpy as np
import pytest

from prefstab.corpus import SCENARIO_DIR
from prefstab.games.game_core import Game, MixedProfile, MixedStrategy, game_from_dict
from prefstab.populations.scenario import load_scenario


def make_game(actions, payoffs) -> Game:
    return game_from_dict({"actions": actions, "payoffs": payoffs})


def random_game(rng: np.random.Generator, n: int, sizes, denominator: int = 12) -> Game:
    """Random game with rational payoffs whose denominators are at most ``denominator``."""
    actions = [[f"a{i + 1}{k + 1}" for k in range(sizes[i])] for i in range(n)]
    payoffs = {}
    for profile in np.ndindex(*sizes):
        payoffs[profile] = [Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, denominator + 1))) for _ in range(n)]
    return Game(actions, payoffs)


def random_strategy(rng: np.random.Generator, size: int) -> MixedStrategy:
    raw = [int(rng.integers(0, 5)) for _ in range(size)]
    if sum(raw) == 0:
        raw[0] = 1
    return MixedStrategy(tuple(Fraction(r, sum(raw)) for r in raw))


def random_profile(rng: np.random.Generator, sizes) -> MixedProfile:
    return MixedProfile(tuple(random_strategy(rng, k) for k in sizes))


@pytest.fixture
def rng():
    return np.random.default_rng(20180530)


@pytest.fixture
def scenario():
    """Load a bundled scenario by name, optionally at another degree of observability."""
    def load(name: str, p=None):
        return load_scenario(SCENARIO_DIR / f"{name}.json", p)
    return load


@pytest.fixture
def pd_game() -> Game:
    return make_game([["C1", "D1"], ["C2", "D2"]], {
        "C1,C2": [2, 2], "C1,D2": [0, 3], "D1,C2": [3, 0], "D1,D2": [1, 1],
    })


@pytest.fixture
def pennies_game() -> Game:
    return make_game([["H1", "T1"], ["H2", "T2"]], {
        "H1,H2": [1, -1], "H1,T2": [-1, 1], "T1,H2": [-1, 1], "T1,T2": [1, -1],
    })


@pytest.fixture
def coordination_game() -> Game:
    return make_game([["a11", "a12"], ["a21", "a22"]], {
        "a11,a21": [5, 5], "a11,a22": [0, 0], "a12,a21": [0, 0], "a12,a22": [5, 10],
    })
