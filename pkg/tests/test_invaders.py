from fractions import Fraction

import pytest

from prefstab.analysis.certificates import verify_certificate
from prefstab.analysis.invaders import (
    InvaderSearchError,
    coalitions,
    deviation_invader,
    find_invader,
    indifferent_mutant,
    mismatch_invader,
    pareto_invader,
    search_coalition,
)
from prefstab.analysis.options import AnalysisOptions
from prefstab.games.equilibrium import SolverLimitError
from prefstab.games.game_core import MixedStrategy
from prefstab.populations.configuration import (
    Configuration,
    PreferenceDistribution,
    PreferenceType,
    Regime,
)


def _observed_defection(game):
    mu = PreferenceDistribution([([PreferenceType.materialist(game, i)], [1]) for i in range(2)])
    return Configuration(game, mu, Regime.observable({(0, 0): game.pure("D1,D2")}))


def _unobserved_cooperators(game):
    mu = PreferenceDistribution([([PreferenceType.dominant(game, i, 0)], [1]) for i in range(2)])
    return Configuration(game, mu, Regime.unobservable([[MixedStrategy.pure(2, 0)], [MixedStrategy.pure(2, 0)]]))


def _observed_efficient(game):
    mu = PreferenceDistribution([([PreferenceType.dominant(game, i, 1)], [1]) for i in range(2)])
    return Configuration(game, mu, Regime.observable({(0, 0): game.pure("a12,a22")}))


def test_coalitions_by_size_then_lexicographic():
    assert coalitions(3) == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
    assert coalitions(1) == [(0,)]


def test_indifferent_mutant_differs_from_incumbents(pd_game):
    mu = PreferenceDistribution([
        ([PreferenceType.indifferent(pd_game, 0, 0), PreferenceType.indifferent(pd_game, 0, 1)], [Fraction(1, 2), Fraction(1, 2)]),
        ([PreferenceType.materialist(pd_game, 1)], [1]),
    ])
    config = Configuration(pd_game, mu, Regime.unobservable([
        [MixedStrategy.pure(2, 1), MixedStrategy.pure(2, 1)], [MixedStrategy.pure(2, 1)],
    ]))
    mutant = indifferent_mutant(config, 0)
    assert mutant.is_indifferent()
    assert mutant not in config.mu.types(0)


@pytest.mark.parametrize("coalition", [(), (2,), (-1,)])
def test_invalid_coalitions(pd_game, coalition):
    with pytest.raises(InvaderSearchError):
        search_coalition(_observed_defection(pd_game), coalition)


def test_pareto_invader_on_dominated_outcome(pd_game):
    config = _observed_defection(pd_game)
    dominated, certificate = pareto_invader(config, AnalysisOptions())
    assert dominated
    assert certificate is not None
    assert certificate.route == "dominated-outcome"
    assert verify_certificate(config, certificate)


def test_pareto_invader_declines_efficient_outcome(coordination_game):
    assert pareto_invader(_observed_efficient(coordination_game), AnalysisOptions()) == (False, None)


def test_mismatch_needs_polymorphism(coordination_game):
    assert mismatch_invader(_observed_efficient(coordination_game), AnalysisOptions()) == (False, None)


def test_deviation_invader_exploits_committed_cooperators(pd_game):
    config = _unobserved_cooperators(pd_game)
    found, certificate = deviation_invader(config, AnalysisOptions())
    assert found
    assert certificate.coalition == (0,)
    assert certificate.route == "profitable-deviation"
    assert certificate.assignment.unobserved[0] == MixedStrategy.pure(2, 1)
    assert verify_certificate(config, certificate)


def test_search_finds_handshake(pd_game):
    config = _observed_defection(pd_game)
    certificate = search_coalition(config, (0, 1))
    assert certificate is not None
    assert verify_certificate(config, certificate)


def test_lone_mutant_cannot_beat_defectors(pd_game):
    assert search_coalition(_observed_defection(pd_game), (0,)) is None


def test_node_cap(pd_game):
    config = _observed_defection(pd_game)
    options = AnalysisOptions(max_nodes=1)
    with pytest.raises(SolverLimitError):
        search_coalition(config, (0, 1), options)
    assert find_invader(config, (0, 1), options) is None


def test_weakly_dominated_coordination_is_invaded(scenario):
    config = scenario("ex2_coordination_a11a21").config
    certificate = find_invader(config, (0, 1))
    assert certificate is not None
    assert certificate.coalition == (0, 1)
    assert verify_certificate(config, certificate)
