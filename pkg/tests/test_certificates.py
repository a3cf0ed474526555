import dataclasses
from fractions import Fraction

import pytest

from prefstab.analysis.certificates import (
    CertificateError,
    ComparisonMode,
    certify,
    fitness_diff_polynomials,
    mimic_assignment,
    mutant_matches,
    verify_certificate,
)
from prefstab.analysis.polynomials import T, eps_symbol
from prefstab.games.game_core import MixedProfile, MixedStrategy
from prefstab.populations.configuration import (
    Configuration,
    MutantAssignment,
    MutantSubProfile,
    PreferenceDistribution,
    PreferenceType,
    Regime,
    average_fitness,
)

from .conftest import random_game


def _observed_defection(game):
    mu = PreferenceDistribution([([PreferenceType.materialist(game, i)], [1]) for i in range(2)])
    return Configuration(game, mu, Regime.observable({(0, 0): game.pure("D1,D2")}))


def _handshake(config):
    game = config.game
    mutants = MutantSubProfile((0, 1), tuple(PreferenceType.indifferent(game, j) for j in range(2)),
                               (Fraction(1, 100), Fraction(1, 100)))
    base = mimic_assignment(config, (0, 1))
    observed = dict(base.observed)
    observed[(1, 1)] = game.pure("C1,C2")
    return mutants, MutantAssignment(observed, base.unobserved)


def test_mutant_matches_are_ordered(pd_game):
    config = _observed_defection(pd_game)
    assert mutant_matches(config, (0, 1)) == [(0, 1), (1, 0), (1, 1)]
    assert mutant_matches(config, (1,)) == [(0, 1)]


def test_handshake_differences(pd_game):
    config = _observed_defection(pd_game)
    mutants, assignment = _handshake(config)
    differences = {d.population: d.polynomial for d in fitness_diff_polynomials(config, mutants, assignment)}
    assert differences[0] == eps_symbol(1)
    assert differences[1] == eps_symbol(0)
    assert differences[0].diagonal().as_expr() == T


def test_handshake_certificate_verifies(pd_game):
    config = _observed_defection(pd_game)
    mutants, assignment = _handshake(config)
    certificate = certify(config, mutants, assignment)
    assert certificate is not None
    assert certificate.bound == 1
    assert certificate.difference(0) == eps_symbol(1)
    assert verify_certificate(config, certificate)
    with pytest.raises(CertificateError):
        certificate.difference(0, incumbent=3)


def test_aggregate_mode_certifies_the_sum(pd_game):
    config = _observed_defection(pd_game)
    mutants, assignment = _handshake(config)
    certificate = certify(config, mutants, assignment, ComparisonMode.AGGREGATE)
    assert certificate is not None and certificate.mode is ComparisonMode.AGGREGATE
    assert verify_certificate(config, certificate)


def test_neutral_mimics_do_not_certify(pd_game):
    config = _observed_defection(pd_game)
    mutants, _ = _handshake(config)
    assert certify(config, mutants, mimic_assignment(config, (0, 1))) is None


def test_assignment_must_cover_mutant_matches(pd_game):
    config = _observed_defection(pd_game)
    mutants, _ = _handshake(config)
    with pytest.raises(CertificateError):
        fitness_diff_polynomials(config, mutants, MutantAssignment({(1, 1): pd_game.pure("C1,C2")}))


def test_tampered_certificate_fails_verification(pd_game):
    config = _observed_defection(pd_game)
    mutants, assignment = _handshake(config)
    certificate = certify(config, mutants, assignment)
    observed = dict(certificate.assignment.observed)
    observed[(1, 1)] = pd_game.pure("D1,D2")
    tampered = dataclasses.replace(certificate, assignment=MutantAssignment(observed))
    assert not verify_certificate(config, tampered)


def test_fitness_differences_are_multilinear_and_exact(rng):
    for _ in range(30):
        n = int(rng.integers(2, 4))
        sizes = [int(rng.integers(2, 4)) for _ in range(n)]
        game = random_game(rng, n, sizes)
        mu = PreferenceDistribution([([PreferenceType.materialist(game, i)], [1]) for i in range(n)])
        x = tuple(int(rng.integers(0, k)) for k in sizes)
        config = Configuration(game, mu, Regime.observable({(0,) * n: game.pure(x)}), validate=False)
        coalition = tuple(range(n))
        observed = dict(mimic_assignment(config, coalition).observed)
        for theta in observed:
            observed[theta] = MixedProfile(tuple(MixedStrategy.pure(k, int(rng.integers(0, k))) for k in sizes))
        assignment = MutantAssignment(observed)
        types = tuple(PreferenceType.indifferent(game, j, 100) for j in coalition)
        mutants = MutantSubProfile(coalition, types, tuple(Fraction(int(rng.integers(1, 10)), 20) for _ in coalition))
        post = config.extend(mutants, assignment)
        for difference in fitness_diff_polynomials(config, mutants, assignment):
            assert difference.polynomial.is_multilinear()
            direct = average_fitness(post, difference.population, 1) - average_fitness(post, difference.population, 0)
            shares = {j: mutants.share_of(j) for j in coalition}
            assert difference.polynomial.evaluate(shares) == direct


def test_handshake_certificate_holds_on_a_box(pd_game):
    config = _observed_defection(pd_game)
    mutants, assignment = _handshake(config)
    certificate = certify(config, mutants, assignment)
    assert certificate.box == 1
    unequal = [point for point in certificate.sample_shares() if point[0] != point[1]]
    assert len(unequal) == 3
    shares = {0: Fraction(1, 10), 1: Fraction(2, 5)}
    assert certificate.difference(0).evaluate(shares) == Fraction(2, 5)
    assert certificate.difference(1).evaluate(shares) == Fraction(1, 10)
    assert verify_certificate(config, certificate)
