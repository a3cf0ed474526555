from fractions import Fraction

import pytest
import sympy

from prefstab.games.game_core import MixedProfile, MixedStrategy, expected_payoff
from prefstab.populations.configuration import (
    Configuration,
    ConfigurationError,
    MutantAssignment,
    MutantSubProfile,
    PreferenceDistribution,
    PreferenceType,
    Regime,
    RegimeKind,
    ShareSumError,
    TypeTag,
    aggregate_outcome,
    average_fitness,
    is_balanced,
    observation_weights,
    post_entry,
    validate_configuration,
)

from .conftest import random_game


def _materialists(game):
    return PreferenceDistribution([([PreferenceType.materialist(game, i)], [1]) for i in range(game.n)])


def test_preference_type_constructors(pd_game):
    materialist = PreferenceType.materialist(pd_game, 0, scale=2, shift=-1)
    assert materialist.is_materialist(pd_game)
    assert materialist.utility(pd_game.parse_profile("D1,C2")) == 5
    assert materialist.strictly_dominant_action() == pd_game.action_index(0, "D1")
    indifferent = PreferenceType.indifferent(pd_game, 1, 3)
    assert indifferent.is_indifferent() and indifferent.strictly_dominant_action() is None
    dominant = PreferenceType.dominant(pd_game, 1, 0)
    assert dominant.strictly_dominant_action() == 0
    assert not dominant.is_materialist(pd_game)


def test_false_materialist_tag_is_rejected(pd_game):
    fake = PreferenceType.from_table(pd_game, 0, {p: Fraction(p[1]) for p in pd_game.profiles()}, [TypeTag.MATERIALIST])
    mu = PreferenceDistribution([([fake], [1]), ([PreferenceType.materialist(pd_game, 1)], [1])])
    with pytest.raises(ConfigurationError, match="tagged materialist"):
        Configuration(pd_game, mu, Regime.observable({(0, 0): pd_game.pure("D1,D2")}))


def test_share_sum_violation(pd_game):
    types = [PreferenceType.materialist(pd_game, 0), PreferenceType.indifferent(pd_game, 0)]
    with pytest.raises(ShareSumError, match="share-sum violation"):
        PreferenceDistribution([(types, ["1/2", "1/3"]), ([PreferenceType.materialist(pd_game, 1)], [1])])


def test_duplicate_types_are_rejected(pd_game):
    types = [PreferenceType.materialist(pd_game, 0), PreferenceType.materialist(pd_game, 0, scale=1)]
    with pytest.raises(ConfigurationError):
        PreferenceDistribution([(types, ["1/2", "1/2"]), ([PreferenceType.materialist(pd_game, 1)], [1])])


def test_observed_cooperation_is_not_an_equilibrium_for_materialists(pd_game):
    mu = _materialists(pd_game)
    config = Configuration(pd_game, mu, Regime.observable({(0, 0): pd_game.pure("C1,C2")}), validate=False)
    report = validate_configuration(config)
    assert not report.ok
    assert report.violation.gain == 1
    with pytest.raises(ConfigurationError, match="Equilibrium violation"):
        Configuration(pd_game, mu, Regime.observable({(0, 0): pd_game.pure("C1,C2")}))


def test_unobserved_defection_is_valid_and_balanced(pd_game):
    d1, d2 = (MixedStrategy.pure(2, 1) for _ in range(2))
    config = Configuration(pd_game, _materialists(pd_game), Regime.unobservable([[d1], [d2]]))
    assert is_balanced(config)
    assert average_fitness(config, 0, 0) == 1
    assert aggregate_outcome(config).pure_profile() == pd_game.parse_profile("D1,D2")


def test_balance_fails_when_types_earn_differently(coordination_game):
    g = coordination_game
    first = [PreferenceType.dominant(g, 0, 0), PreferenceType.dominant(g, 0, 1)]
    mu = PreferenceDistribution([(first, ["1/2", "1/2"]), ([PreferenceType.dominant(g, 1, 1)], [1])])
    b = {(0, 0): g.pure("a11,a22"), (1, 0): g.pure("a12,a22")}
    config = Configuration(g, mu, Regime.observable(b))
    assert not is_balanced(config)
    assert average_fitness(config, 0, 0) == 0
    assert average_fitness(config, 0, 1) == 5


def test_partial_regime_needs_interior_p(pd_game):
    with pytest.raises(ConfigurationError):
        Regime.partial(1, {}, [])


def test_partial_weights_sum_to_one(rng):
    for _ in range(20):
        p = Fraction(int(rng.integers(1, 50)), 50)
        for players in ([0, 1], [0, 1, 2], [1]):
            weights = observation_weights(players, p)
            assert len(weights) == 2 ** len(players)
            assert sum(w for _, w in weights) == 1


def test_post_entry_rescales_shares(pd_game):
    eps = Fraction(1, 10)
    mutant = PreferenceType.indifferent(pd_game, 0)
    mu = post_entry(_materialists(pd_game), MutantSubProfile((0,), (mutant,), (eps,)))
    assert mu.support_sizes() == (2, 1)
    assert mu.share(0, 0) == Fraction(9, 10) and mu.share(0, 1) == eps


def test_mutant_sub_profile_checks_roles_and_shares(pd_game):
    with pytest.raises(ConfigurationError):
        MutantSubProfile((0,), (PreferenceType.indifferent(pd_game, 1),), (Fraction(1, 10),))
    with pytest.raises(ConfigurationError):
        MutantSubProfile((0,), (PreferenceType.indifferent(pd_game, 0),), (Fraction(1),))


def test_extend_requires_every_mutant_match(pd_game):
    config = Configuration(pd_game, _materialists(pd_game), Regime.observable({(0, 0): pd_game.pure("D1,D2")}))
    mutants = MutantSubProfile((0,), (PreferenceType.indifferent(pd_game, 0),), (Fraction(1, 10),))
    with pytest.raises(ConfigurationError, match="misses the observed match"):
        config.extend(mutants, MutantAssignment())
    post = config.extend(mutants, MutantAssignment({(1, 0): pd_game.pure("C1,D2")}))
    assert average_fitness(post, 0, 1) == 0


def test_unobserved_fitness_averages_to_aggregate_payoff(rng):
    for _ in range(100):
        n = int(rng.integers(2, 4))
        sizes = [int(rng.integers(2, 4)) for _ in range(n)]
        game = random_game(rng, n, sizes)
        populations, strategies = [], []
        for i in range(n):
            count = int(rng.integers(1, 3))
            types = [PreferenceType.indifferent(game, i, k) for k in range(count)]
            shares = [Fraction(1, count)] * count
            shared = rng.random() < 0.5
            row = []
            for k in range(count):
                action = 0 if shared else int(rng.integers(0, sizes[i]))
                row.append(MixedStrategy.pure(sizes[i], action))
            populations.append((types, shares))
            strategies.append(row)
        config = Configuration(game, PreferenceDistribution(populations), Regime.unobservable(strategies), validate=False)
        x = aggregate_outcome(config).product
        payoff = expected_payoff(game, x)
        for i in range(n):
            fitness = [average_fitness(config, i, k) for k in range(len(config.mu.types(i)))]
            mean = sum(config.mu.share(i, k) * f for k, f in enumerate(fitness))
            assert mean == payoff[i]
            if is_balanced(config):
                assert all(f == payoff[i] for f in fitness)


def test_partial_payoffs_recover_both_limits(rng):
    p = sympy.Symbol("p", positive=True)
    for _ in range(20):
        game = random_game(rng, 2, [2, 2])
        mu = _materialists(game)
        b = {(0, 0): game.pure((int(rng.integers(0, 2)), int(rng.integers(0, 2))))}
        s = [[MixedStrategy((Fraction(1, 3), Fraction(2, 3)))], [MixedStrategy((Fraction(3, 4), Fraction(1, 4)))]]
        partial = Configuration(game, mu, Regime.partial(p, b, s), validate=False)
        observed = Configuration(game, mu, Regime.observable(b), validate=False)
        unobserved = Configuration(game, mu, Regime.unobservable(s), validate=False)
        assert partial.kind is RegimeKind.PARTIAL
        values = partial.match_payoff((0, 0))
        for i in range(2):
            assert sympy.simplify(values[i].subs(p, 1) - observed.match_payoff((0, 0))[i]) == 0
            assert sympy.simplify(values[i].subs(p, 0) - unobserved.match_payoff((0, 0))[i]) == 0
