from fractions import Fraction

import pytest

from prefstab.games.equilibrium import (
    EquilibriumError,
    TriState,
    classify_nash,
    deviants_all_worse,
    enumerate_pure_nash,
    is_aggregate_strong_nash,
    is_nash,
    is_strict_nash,
    is_strictly_strong_nash,
    solve_mixed_nash,
)
from prefstab.games.game_core import Game, MixedProfile, MixedStrategy, iter_profiles

from .conftest import make_game, random_game, random_profile


def test_pure_nash_of_prisoners_dilemma(pd_game):
    assert enumerate_pure_nash(pd_game) == [pd_game.parse_profile("D1,D2")]
    assert is_strict_nash(pd_game, pd_game.pure("D1,D2"))
    assert not is_nash(pd_game, pd_game.pure("C1,C2"))


def test_matching_pennies_has_unique_mixed_equilibrium(pennies_game):
    solution = solve_mixed_nash(pennies_game, 2)
    half = MixedStrategy((Fraction(1, 2), Fraction(1, 2)))
    assert solution.complete
    assert list(solution.profiles) == [MixedProfile((half, half))]
    classification = classify_nash(pennies_game, MixedProfile((half, half)))
    assert classification.completely_mixed and not classification.strict
    assert classification.unique is TriState.YES


def test_classify_rejects_non_equilibria(pd_game):
    with pytest.raises(EquilibriumError):
        classify_nash(pd_game, pd_game.pure("C1,C2"))


def test_coordination_equilibria_are_not_unique(coordination_game):
    g = coordination_game
    assert enumerate_pure_nash(g) == [g.parse_profile("a11,a21"), g.parse_profile("a12,a22")]
    classification = classify_nash(g, g.pure("a11,a21"))
    assert classification.strict
    assert classification.unique is TriState.NO


def test_aggregate_strong_nash(coordination_game):
    g = coordination_game
    assert is_aggregate_strong_nash(g, g.pure("a12,a22"))
    assert not is_aggregate_strong_nash(g, g.pure("a11,a21"))


def test_strictly_strong_nash(coordination_game, pd_game):
    g = coordination_game
    assert is_strictly_strong_nash(g, g.pure("a12,a22"), 4) is TriState.YES
    assert is_strictly_strong_nash(g, g.pure("a11,a21"), 4) is TriState.NO
    assert is_strictly_strong_nash(pd_game, pd_game.pure("D1,D2"), 4) is TriState.NO


def test_deviants_all_worse(coordination_game, pd_game):
    # moving to (a11,a21) leaves the first deviant exactly as well off
    assert not deviants_all_worse(coordination_game, coordination_game.pure("a12,a22"))
    assert not deviants_all_worse(pd_game, pd_game.pure("D1,D2"))


def test_three_player_example_deviations(scenario):
    game = scenario("ex4_deviants_worse").game
    profile = game.pure("a11,a21,a31")
    assert deviants_all_worse(game, profile)
    assert is_strictly_strong_nash(game, profile, 4) is not TriState.NO


def test_prisoners_dilemma_equilibrium_is_unique(pd_game):
    solution = solve_mixed_nash(pd_game, 2)
    assert solution.complete
    assert list(solution.profiles) == [pd_game.pure("D1,D2")]
    assert classify_nash(pd_game, pd_game.pure("D1,D2")).unique is TriState.YES


def test_tied_replies_leave_enumeration_incomplete():
    game = make_game([["a11", "a12"], ["a21", "a22"]], {
        "a11,a21": [1, 1], "a11,a22": [1, 0], "a12,a21": [1, 0], "a12,a22": [0, 1],
    })
    solution = solve_mixed_nash(game, 2)
    assert not solution.complete
    assert game.pure("a11,a21") in solution.profiles
    assert classify_nash(game, game.pure("a11,a21")).unique is not TriState.YES


def _candidate_profiles(rng, game):
    profiles = [game.pure(x) for x in game.profiles()]
    profiles.append(random_profile(rng, game.sizes))
    if game.n == 2:
        profiles.extend(solve_mixed_nash(game, 2).profiles)
    return profiles


def test_is_nash_is_invariant_under_positive_affine_transforms(rng):
    for _ in range(40):
        n = int(rng.integers(2, 4))
        sizes = [int(rng.integers(2, 4)) for _ in range(n)]
        game = random_game(rng, n, sizes)
        player = int(rng.integers(0, n))
        scale = Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 4)))
        shift = Fraction(int(rng.integers(-5, 6)), 2)
        payoffs = {}
        for x in game.profiles():
            values = list(game.payoff(x))
            values[player] = scale * values[player] + shift
            payoffs[x] = values
        transformed = Game(game.action_sets, payoffs)
        for profile in _candidate_profiles(rng, game):
            assert is_nash(game, profile) == is_nash(transformed, profile)


def test_is_nash_is_invariant_under_relabeling(rng):
    for _ in range(40):
        n = int(rng.integers(2, 4))
        sizes = [int(rng.integers(2, 4)) for _ in range(n)]
        game = random_game(rng, n, sizes)
        # new player k is old player order[k]; new action b of old player i is perms[i][b]
        order = [int(i) for i in rng.permutation(n)]
        perms = [[int(a) for a in rng.permutation(k)] for k in sizes]
        actions = [[game.action_sets[i][perms[i][b]] for b in range(sizes[i])] for i in order]
        payoffs = {}
        for new in iter_profiles([sizes[i] for i in order]):
            old = [0] * n
            for k, i in enumerate(order):
                old[i] = perms[i][new[k]]
            values = game.payoff(tuple(old))
            payoffs[new] = [values[i] for i in order]
        relabeled = Game(actions, payoffs)
        for profile in _candidate_profiles(rng, game):
            mapped = MixedProfile(tuple(
                MixedStrategy(tuple(profile[i].weights[perms[i][b]] for b in range(sizes[i]))) for i in order
            ))
            assert is_nash(game, profile) == is_nash(relabeled, mapped)
