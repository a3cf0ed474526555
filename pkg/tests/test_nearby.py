from fractions import Fraction

import pytest

from prefstab.analysis.nearby import (
    NearbyEquilibriumError,
    incumbent_distance,
    nearby_equilibrium,
    rebalance,
    solve_indifference,
    verify_unobservable_assignment,
)
from prefstab.games.game_core import MixedStrategy
from prefstab.populations.configuration import MutantAssignment, MutantSubProfile, PreferenceType

HALF = MixedStrategy((Fraction(1, 2), Fraction(1, 2), Fraction(0)))


def _mutants(game, eps):
    return MutantSubProfile((0, 1), tuple(PreferenceType.indifferent(game, j) for j in range(2)), (eps, eps))


def test_rebalance_keeps_aggregate():
    eps = Fraction(1, 10)
    mutant = MixedStrategy.pure(3, 0)
    adjusted = rebalance(HALF, mutant, eps)
    assert adjusted == MixedStrategy((Fraction(4, 9), Fraction(5, 9), Fraction(0)))
    for a in range(3):
        assert (1 - eps) * adjusted[a] + eps * mutant[a] == HALF[a]


def test_rebalance_rejects_large_share():
    with pytest.raises(NearbyEquilibriumError):
        rebalance(HALF, MixedStrategy.pure(3, 0), Fraction(3, 5))


def test_solve_indifference(scenario):
    config = scenario("ex5_p0").config
    eps = Fraction(1, 4)
    solved = solve_indifference(config, 0, MixedStrategy((Fraction(1, 2), Fraction(0), Fraction(1, 2))), eps)
    assert solved[0] == (2 - 3 * eps) / (4 * (1 - eps))
    assert solved[2] == 0


@pytest.mark.parametrize("q, construction", [
    ((Fraction(1), Fraction(0), Fraction(0)), "rebalance"),
    ((Fraction(0), Fraction(1, 2), Fraction(1, 2)), "indifference"),
])
def test_nearby_equilibrium(scenario, q, construction):
    config = scenario("ex5_p0").config
    eps = Fraction(1, 10)
    strategy = MixedStrategy(q)
    result = nearby_equilibrium(config, _mutants(config.game, eps), {0: strategy, 1: strategy})
    assert result.found
    assert result.constructions == (construction, construction)
    expected = (1 - eps * (1 + q[0] - q[1])) / (2 * (1 - eps))
    assert result.assignment.incumbents[0][0][0] == expected
    assert result.distance == abs(expected - Fraction(1, 2))


def test_nearby_radius(scenario):
    config = scenario("ex5_p0").config
    strategy = MixedStrategy.pure(3, 0)
    result = nearby_equilibrium(config, _mutants(config.game, Fraction(1, 10)), {0: strategy, 1: strategy},
                                eta=Fraction(1, 100))
    assert not result.found
    assert "exceeds" in result.reason


def test_nearby_needs_unobserved_types(scenario):
    config = scenario("ex2_coordination_a12a22").config
    result = nearby_equilibrium(config, _mutants(config.game, Fraction(1, 10)), {})
    assert not result.found
    assert "unobserved" in result.reason


def test_no_nearby_equilibrium_off_support(scenario):
    loaded = scenario("nongeneric_materialist")
    result = nearby_equilibrium(loaded.config, loaded.mutants, loaded.assignment.unobserved)
    assert not result.found
    assert result.reason.startswith("not an equilibrium")


def test_far_assignment(scenario):
    loaded = scenario("ex5_p0")
    check = verify_unobservable_assignment(loaded.config, loaded.mutants, loaded.assignment)
    assert check.equilibrium
    assert check.distance == Fraction(1, 2)
    assert incumbent_distance(loaded.config, loaded.config.regime.s) == 0


def test_assignment_check_needs_unobserved_types(scenario):
    config = scenario("ex2_coordination_a12a22").config
    with pytest.raises(NearbyEquilibriumError):
        verify_unobservable_assignment(config, _mutants(config.game, Fraction(1, 10)), MutantAssignment())
