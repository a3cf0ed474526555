from fractions import Fraction

import pytest
import sympy

from prefstab.analysis.barriers import (
    BarrierError,
    aggregate_strong_barrier,
    aggregate_strong_route,
    all_types_dominant,
    deviation_barrier,
    dominant_focal_route,
    focal_profile,
    loss_ratio,
    max_loss,
    pairwise_bounds,
    pairwise_route,
    strict_margin,
    supporting_weights,
    two_player_efficient_route,
)
from prefstab.analysis.polynomials import eps_symbol
from prefstab.populations.configuration import (
    Configuration,
    PreferenceDistribution,
    PreferenceType,
    Regime,
)


def _dominant(game, a_star):
    mu = PreferenceDistribution([([PreferenceType.dominant(game, i, a_star[i])], [1]) for i in range(game.n)])
    return Configuration(game, mu, Regime.observable({(0,) * game.n: game.pure(a_star)}))


def test_focal_profile(scenario):
    assert focal_profile(scenario("ex1_battle_of_sexes").config) == (0, 1)
    assert focal_profile(scenario("nongeneric_dominant").config) == (0, 0)
    assert focal_profile(scenario("ex5_p0").config) is None


def test_all_types_dominant(scenario):
    assert all_types_dominant(scenario("ex2_coordination_a12a22").config, (1, 1))
    assert not all_types_dominant(scenario("ex1_battle_of_sexes").config, (0, 1))


def test_max_loss_and_margins(coordination_game):
    assert max_loss(coordination_game, (1, 1)) == 10
    assert strict_margin(coordination_game, (1, 1), 0) == 5
    assert strict_margin(coordination_game, (1, 1), 1) == 10


def test_aggregate_strong_barrier(coordination_game, pd_game):
    assert aggregate_strong_barrier(coordination_game, (1, 1)) == Fraction(1, 3)
    with pytest.raises(BarrierError):
        aggregate_strong_barrier(pd_game, (1, 1))


def test_aggregate_strong_route(scenario):
    assert aggregate_strong_route(scenario("ex2_coordination_a12a22").config) == Fraction(1, 3)
    assert aggregate_strong_route(scenario("ex1_battle_of_sexes").config) is None


def test_dominant_focal_route(scenario):
    assert dominant_focal_route(scenario("nongeneric_dominant").config) == Fraction(1, 2)
    assert dominant_focal_route(scenario("nongeneric_materialist").config) is None


def test_two_player_efficient_route(coordination_game, scenario):
    assert two_player_efficient_route(_dominant(coordination_game, (1, 1)))
    assert not two_player_efficient_route(scenario("ex2_coordination_a11a21").config)


def test_supporting_weights(scenario):
    game = scenario("ex1_battle_of_sexes").game
    assert supporting_weights(game, (0, 1)) == (1, None)


def test_supporting_weights_reject_dominated_outcome(pd_game):
    assert supporting_weights(pd_game, (1, 1)) is None


def test_pairwise_route_battle_of_sexes(scenario):
    route = pairwise_route(scenario("ex1_battle_of_sexes").config)
    assert route is not None
    assert route.barrier == Fraction(1, 2)
    assert route.weight >= 1


def test_pairwise_route_needs_two_by_two(scenario):
    assert pairwise_route(scenario("ex5_p0").config) is None


def test_pairwise_bounds(scenario):
    config = scenario("ex1_battle_of_sexes").config
    eps = eps_symbol(1)
    lower, upper = pairwise_bounds(config, 0, Fraction(1, 2))
    assert sympy.expand(lower - (5 * (1 - eps))) == 0
    assert sympy.expand(upper - (1 - eps) - 15 * eps) == 0


def test_pairwise_bounds_need_premises(scenario):
    with pytest.raises(BarrierError):
        pairwise_bounds(scenario("ex5_p0").config, 0, 0)


def test_deviation_barrier(scenario):
    assert deviation_barrier(scenario("ex1_battle_of_sexes").config, 0) == Fraction(1, 6)


def test_pairwise_barrier_follows_the_weighted_inequality(scenario):
    config = scenario("ex1_battle_of_sexes").config
    game = config.game
    route = pairwise_route(config)
    r1, r2 = route.ratios
    t = route.weight
    assert route.ratios == (loss_ratio(config, 0, (0, 1)), loss_ratio(config, 1, (0, 1)))
    base = game.payoff((0, 1))
    for a in game.profiles():
        d1, d2 = (game.payoff(a)[j] - base[j] for j in range(2))
        assert d1 + t * d2 <= 0
    assert route.barrier == min(1 / (1 + t * r1), 1 / (1 + r2 / t))
    one_sided = [deviation_barrier(config, i) for i in range(2)]
    assert route.barrier >= max(b for b in one_sided if b is not None)
    # below the barrier both brackets of the weighted sum are negative
    for k in range(1, 10):
        e = route.barrier * Fraction(k, 10)
        assert t * r1 - (1 - e) / e < 0
        assert r2 - t * (1 - e) / e < 0
