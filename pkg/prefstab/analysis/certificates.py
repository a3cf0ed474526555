"""Invader certificates: post-entry fitness differences as exact share polynomials.

A certificate fixes a coalition, mutant types and a mutant assignment. It
holds when, along eps_j = t for small t, no incumbent type in any coalition
population outperforms the mutant and the mutants are not exactly neutral.
Everything a certificate claims can be re-derived by recomputing average
fitness on the explicit post-entry configuration.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..populations.configuration import (
    Configuration,
    ConfigurationError,
    MutantAssignment,
    MutantSubProfile,
    PreferenceType,
    RegimeKind,
    TypeProfile,
    average_fitness,
    equilibrium_slacks,
    validate_configuration,
)
from .polynomials import (
    EpsPolynomial,
    box_samples,
    box_validity,
    diagonal_samples,
    diagonal_validity,
    eps_symbol,
    eventually_nonnegative,
)

logger = logging.getLogger(__name__)


class CertificateError(Exception):
    """Exception raised for inconsistent certificates or assignments."""
    pass


class ComparisonMode(Enum):
    """How mutant and incumbent fitness are compared."""
    PER_POPULATION = "per_population"  # every coalition population separately
    AGGREGATE = "aggregate"            # fitness sums over the coalition


@dataclass(frozen=True)
class FitnessDifference:
    """Mutant minus incumbent average fitness in one population."""
    population: int
    incumbent: int
    polynomial: EpsPolynomial


@dataclass(frozen=True)
class SlackCondition:
    """A post-entry best-response slack that depends on the shares."""
    observed: bool
    population: int
    types: TypeProfile
    action: int
    polynomial: EpsPolynomial


@dataclass(frozen=True)
class InvaderCertificate:
    """A mutant sub-profile with an assignment under which the mutants are not driven out.

    Along the diagonal eps_j = t the claim holds for 0 < t < ``bound``. When
    ``box`` is set it also holds for every share vector in (0, box)^J.
    """
    coalition: Tuple[int, ...]
    mutant_types: Tuple[PreferenceType, ...]
    assignment: MutantAssignment
    differences: Tuple[FitnessDifference, ...]
    slacks: Tuple[SlackCondition, ...]
    bound: Fraction
    bound_exact: bool
    mode: ComparisonMode = ComparisonMode.PER_POPULATION
    route: str = "search"
    box: Optional[Fraction] = None

    def difference(self, population: int, incumbent: int = 0) -> EpsPolynomial:
        for item in self.differences:
            if item.population == population and item.incumbent == incumbent:
                return item.polynomial
        raise CertificateError(f"No difference recorded for population {population + 1}, type {incumbent}")

    def mutants_with(self, shares: Mapping[int, Fraction]) -> MutantSubProfile:
        return MutantSubProfile(self.coalition, self.mutant_types, tuple(shares[j] for j in self.coalition))

    def sample_points(self, count: int = 3) -> List[Fraction]:
        return diagonal_samples(self.bound, count)

    def sample_shares(self, count: int = 3) -> List[Dict[int, Fraction]]:
        """Diagonal samples, then points of the box with unequal shares."""
        points = [{j: t for j in self.coalition} for t in self.sample_points(count)]
        if self.box is not None:
            points.extend(box_samples(self.coalition, self.box, count))
        return points


def symbolic_mutants(coalition: Sequence[int], mutant_types: Sequence[PreferenceType]) -> MutantSubProfile:
    return MutantSubProfile(tuple(coalition), tuple(mutant_types), tuple(eps_symbol(j) for j in coalition))


def mutant_matches(config: Configuration, coalition: Sequence[int]) -> List[TypeProfile]:
    """Extended type profiles with at least one mutant, by number of mutants then lexicographically."""
    incumbents = config.mu.support_sizes()
    ranges = [range(k + 1) if i in coalition else range(k) for i, k in enumerate(incumbents)]
    matches = [theta for theta in itertools.product(*ranges)
               if any(theta[j] == incumbents[j] for j in coalition)]
    return sorted(matches, key=lambda theta: (mutant_count(config, theta), theta))


def mutant_count(config: Configuration, theta: TypeProfile) -> int:
    incumbents = config.mu.support_sizes()
    return sum(1 for i, k in enumerate(theta) if k == incumbents[i])


def mimic_profile(config: Configuration, theta: TypeProfile, choice: Dict[int, int]) -> TypeProfile:
    """Replace each mutant in ``theta`` by the incumbent type it mimics."""
    incumbents = config.mu.support_sizes()
    return tuple(choice[i] if k == incumbents[i] else k for i, k in enumerate(theta))


def mimic_assignment(config: Configuration, coalition: Sequence[int],
                     choice: Optional[Dict[int, int]] = None) -> MutantAssignment:
    """Mutants behave exactly like the incumbent types in ``choice`` (type 0 by default)."""
    choice = {j: 0 for j in coalition} if choice is None else dict(choice)
    observed = {}
    unobserved = {}
    if config.kind in (RegimeKind.P1, RegimeKind.PARTIAL):
        for theta in mutant_matches(config, coalition):
            observed[theta] = config.b(mimic_profile(config, theta, choice))
    if config.kind in (RegimeKind.P0, RegimeKind.PARTIAL):
        for j in coalition:
            unobserved[j] = config.s(j, choice[j])
    return MutantAssignment(observed, unobserved)


def fitness_diff_polynomials(config: Configuration, mutants: MutantSubProfile,
                             assignment: MutantAssignment) -> List[FitnessDifference]:
    """Mutant minus incumbent average fitness, per coalition population and incumbent type.

    Args:
        config: Pre-entry configuration
        mutants: Coalition and mutant types; shares are replaced by the symbols eps_j
        assignment: Post-entry play wherever a mutant is involved

    Returns:
        One FitnessDifference per (population in the coalition, incumbent type)
    """
    symbolic = symbolic_mutants(mutants.coalition, mutants.mutant_types)
    try:
        post = config.extend(symbolic, assignment)
    except ConfigurationError as e:
        raise CertificateError(f"Invalid assignment: {str(e)}")
    differences = []
    for j in mutants.coalition:
        index = len(config.mu.types(j))
        mutant = average_fitness(post, j, index)
        for k in range(index):
            polynomial = EpsPolynomial(mutant - average_fitness(post, j, k), mutants.coalition)
            differences.append(FitnessDifference(j, k, polynomial))
    return differences


def slack_polynomials(config: Configuration, mutants: MutantSubProfile,
                      assignment: MutantAssignment) -> List[SlackCondition]:
    """Best-response slacks of the post-entry configuration that are not identically zero."""
    symbolic = symbolic_mutants(mutants.coalition, mutants.mutant_types)
    post = config.extend(symbolic, assignment)
    conditions = []
    for slack in equilibrium_slacks(post):
        polynomial = EpsPolynomial(slack.value, mutants.coalition)
        if not polynomial.is_zero():
            conditions.append(SlackCondition(slack.observed, slack.player, slack.types, slack.action, polynomial))
    return conditions


def _comparison_polynomials(differences: Sequence[FitnessDifference], coalition: Sequence[int],
                            mode: ComparisonMode) -> Iterator[EpsPolynomial]:
    if mode is ComparisonMode.PER_POPULATION:
        for item in differences:
            yield item.polynomial
        return
    by_population = [[d.polynomial for d in differences if d.population == j] for j in coalition]
    for combo in itertools.product(*by_population):
        yield EpsPolynomial(sum((p.expr for p in combo), 0), coalition)


def certify(config: Configuration, mutants: MutantSubProfile, assignment: MutantAssignment,
            mode: ComparisonMode = ComparisonMode.PER_POPULATION, route: str = "search") -> Optional[InvaderCertificate]:
    """Turn an assignment into a certificate if the mutants are not driven out near zero.

    Returns:
        InvaderCertificate, or None when some incumbent eventually does strictly
        better, the mutants are exactly neutral, or the assignment is not an
        equilibrium for small shares
    """
    differences = fitness_diff_polynomials(config, mutants, assignment)
    compared = list(_comparison_polynomials(differences, mutants.coalition, mode))
    diagonals = [p.diagonal() for p in compared]
    if all(d.is_zero for d in diagonals):
        return None
    if not all(eventually_nonnegative(d) for d in diagonals):
        return None

    slacks = slack_polynomials(config, mutants, assignment)
    conditions = compared + [s.polynomial for s in slacks]
    bound, exact = diagonal_validity(conditions)
    if bound is None:
        logger.debug(f"Assignment for coalition {mutants.coalition} breaks an equilibrium condition near zero")
        return None
    box = box_validity(conditions, bound)
    certificate = InvaderCertificate(
        mutants.coalition, mutants.mutant_types, assignment, tuple(differences), tuple(slacks),
        bound, exact, mode, route, box,
    )
    logger.info(f"Invader certificate for coalition {tuple(j + 1 for j in mutants.coalition)} via {route}, "
                f"valid below {bound} on the diagonal and on the box {box}")
    return certificate


def verify_certificate(config: Configuration, certificate: InvaderCertificate, samples: int = 3) -> bool:
    """Recompute fitness on explicit post-entry configurations at sample shares.

    Shares are sampled on the diagonal and, when the certificate has a box,
    at unequal points inside it. The polynomial values must match direct
    evaluation exactly, the post-entry strategies must be an equilibrium and
    the comparison must favour the mutants at every sample.
    """
    for point in certificate.sample_shares(samples):
        post = config.extend(certificate.mutants_with(point), certificate.assignment)
        if not validate_configuration(post).ok:
            logger.warning(f"Certificate assignment is not an equilibrium at {point}")
            return False
        values = {}
        for item in certificate.differences:
            index = len(config.mu.types(item.population))
            direct = average_fitness(post, item.population, index) - average_fitness(post, item.population, item.incumbent)
            if item.polynomial.evaluate(point) != direct:
                logger.warning(f"Polynomial for population {item.population + 1} disagrees with direct fitness at {point}")
                return False
            values[(item.population, item.incumbent)] = direct
        if certificate.mode is ComparisonMode.PER_POPULATION:
            compared = list(values.values())
        else:
            groups = [[v for (j, _), v in values.items() if j == population] for population in certificate.coalition]
            compared = [sum(combo) for combo in itertools.product(*groups)]
        if any(v < 0 for v in compared) or not any(v > 0 for v in compared):
            logger.warning(f"Mutants are not ahead at {point}")
            return False
    return True
