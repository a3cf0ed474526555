from fractions import Fraction

from prefstab.games.efficiency import (
    DominanceRelation,
    EfficiencyStatus,
    compare_payoffs,
    dominance_relation,
    efficiency_status,
    find_dominator,
)
from prefstab.games.game_core import Game, product_grid

from .conftest import random_game


def test_compare_payoffs():
    assert compare_payoffs((2, 2), (1, 1)) is DominanceRelation.STRONG
    assert compare_payoffs((1, 2), (1, 1)) is DominanceRelation.WEAK
    assert compare_payoffs((1, 1), (1, 1)) is DominanceRelation.NONE
    assert compare_payoffs((0, 3), (1, 1)) is DominanceRelation.NONE


def test_defection_is_strongly_dominated(pd_game):
    report = efficiency_status(pd_game, pd_game.pure("D1,D2"), 4)
    assert report.status is EfficiencyStatus.DOMINATED
    assert report.relation is DominanceRelation.STRONG
    assert report.weakly_efficient is False
    assert dominance_relation(pd_game, report.dominator, pd_game.pure("D1,D2")) is DominanceRelation.STRONG


def test_cooperation_is_pareto_efficient(pd_game):
    report = efficiency_status(pd_game, pd_game.pure("C1,C2"), 4)
    assert report.status is EfficiencyStatus.PARETO_EFFICIENT
    assert report.correlated_gain == 0


def test_coordination_outcome_is_only_weakly_dominated(coordination_game):
    g = coordination_game
    report = efficiency_status(g, g.pure("a11,a21"), 10)
    assert report.status is EfficiencyStatus.DOMINATED
    assert report.relation is DominanceRelation.WEAK
    assert report.weakly_efficient is True
    assert report.dominator == g.pure("a12,a22")
    assert report.correlated_gain == 5
    assert report.strict_slack == Fraction(0)


def test_find_dominator_prefers_pure_strong_dominators(pd_game):
    dominator, relation = find_dominator(pd_game, pd_game.pure("D1,D2"), 2, strong_only=True)
    assert relation is DominanceRelation.STRONG
    assert dominator == pd_game.pure("C1,C2")


def test_strong_only_ignores_weak_dominators(coordination_game):
    g = coordination_game
    dominator, relation = find_dominator(g, g.pure("a11,a21"), 4, strong_only=True)
    assert dominator is None and relation is DominanceRelation.NONE


def _small_games(rng, count):
    for _ in range(count):
        n = int(rng.integers(2, 4))
        sizes = [int(rng.integers(2, 4)) for _ in range(n)]
        yield random_game(rng, n, sizes, denominator=4)


def test_efficient_verdicts_survive_exhaustive_search(rng):
    checked = 0
    for game in _small_games(rng, 15):
        for x in game.profiles():
            sigma = game.pure(x)
            if efficiency_status(game, sigma, 2).status is not EfficiencyStatus.PARETO_EFFICIENT:
                continue
            checked += 1
            for y in game.profiles():
                assert dominance_relation(game, game.pure(y), sigma) is DominanceRelation.NONE
            for candidate in product_grid(game, 2):
                assert dominance_relation(game, candidate, sigma) is DominanceRelation.NONE
    assert checked > 0


def test_status_is_invariant_under_a_uniform_shift(rng):
    for game in _small_games(rng, 10):
        shift = Fraction(int(rng.integers(-6, 7)), 3)
        shifted = Game(game.action_sets, {x: [v + shift for v in game.payoff(x)] for x in game.profiles()})
        x = tuple(int(rng.integers(0, k)) for k in game.sizes)
        before = efficiency_status(game, game.pure(x), 2)
        after = efficiency_status(shifted, shifted.pure(x), 2)
        assert after.status is before.status
        assert after.relation is before.relation
        assert after.weakly_efficient == before.weakly_efficient
        assert after.dominator == before.dominator
        assert after.correlated_gain == before.correlated_gain
