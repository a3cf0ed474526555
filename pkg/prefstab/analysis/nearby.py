"""Nearby post-entry equilibria when types are not observed.

Incumbents compensate for the entrants so that the opponents' indifference
over their supports survives: either by rebalancing their own mixture so the
population aggregate is unchanged, or (two populations) by solving the
opponents' indifference equations directly.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Mapping, Optional, Tuple

from ..games.exact_lp import solve_linear_system
from ..games.game_core import MixedStrategy
from ..populations.configuration import (
    Configuration,
    ConfigurationError,
    MutantAssignment,
    MutantSubProfile,
    RegimeKind,
    as_fraction,
    is_numeric,
    validate_configuration,
)
from .certificates import slack_polynomials
from .polynomials import holds_on_box

logger = logging.getLogger(__name__)


class NearbyEquilibriumError(Exception):
    """Exception raised when mutant shares lie outside a construction's validity bounds."""
    pass


@dataclass(frozen=True)
class NearbyResult:
    """A constructed post-entry equilibrium, or the reason none was built."""
    assignment: Optional[MutantAssignment] = None
    distance: Optional[Fraction] = None
    constructions: Tuple[str, ...] = ()
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.assignment is not None


@dataclass(frozen=True)
class AssignmentCheck:
    equilibrium: bool
    distance: Fraction


def incumbent_distance(config: Configuration, incumbents) -> Fraction:
    """Max-norm distance between adjusted and original incumbent strategies."""
    distance = Fraction(0)
    for i, strategies in enumerate(incumbents):
        for k, strategy in enumerate(strategies):
            distance = max(distance, strategy.distance(config.s(i, k)))
    return distance


def rebalance(sigma: MixedStrategy, mutant: MixedStrategy, eps: Fraction) -> MixedStrategy:
    """Incumbent mixture keeping the population aggregate at ``sigma``.

    Raises:
        NearbyEquilibriumError: if the share is too large for a valid mixture
    """
    weights = tuple((sigma[a] - eps * mutant[a]) / (1 - eps) for a in range(len(sigma)))
    if any(w < 0 for w in weights):
        bound = min(sigma[a] for a in sigma.support)
        raise NearbyEquilibriumError(f"Share {eps} too large to rebalance {sigma} (needs eps < {bound})")
    return MixedStrategy(weights)


def solve_indifference(config: Configuration, population: int, mutant: MixedStrategy, eps: Fraction) -> Optional[MixedStrategy]:
    """Two populations: incumbent mixture on its own support keeping the opponent
    indifferent over the opponent's support.

    Returns:
        The mixture, or None when the equations have no solution

    Raises:
        NearbyEquilibriumError: if the solution has a negative weight
    """
    game = config.game
    j, o = population, 1 - population
    own_support = config.s(j, 0).support
    rival_support = config.s(o, 0).support
    rival_table = config.mu.types(o)[0].table

    def utility(a_o: int, a_j: int) -> Fraction:
        profile = [0, 0]
        profile[o], profile[j] = a_o, a_j
        return rival_table[tuple(profile)]

    matrix: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for a, b in zip(rival_support, rival_support[1:]):
        matrix.append([(1 - eps) * (utility(a, c) - utility(b, c)) for c in own_support])
        rhs.append(-eps * sum(mutant[c] * (utility(a, c) - utility(b, c)) for c in range(game.sizes[j])))
    matrix.append([Fraction(1)] * len(own_support))
    rhs.append(Fraction(1))
    solution, unique = solve_linear_system(matrix, rhs)
    if solution is None:
        return None
    if not unique:
        logger.debug(f"Indifference system of population {j + 1} is underdetermined; free weights set to 0")
    if any(w < 0 for w in solution):
        raise NearbyEquilibriumError(f"Share {eps} too large: compensating mixture of population {j + 1} is {solution}")
    weights = [Fraction(0)] * game.sizes[j]
    for c, w in zip(own_support, solution):
        weights[c] = w
    return MixedStrategy(tuple(weights))


def nearby_equilibrium(config: Configuration, mutants: MutantSubProfile, strategies: Mapping[int, MixedStrategy],
                       eta: Optional[Fraction] = None) -> NearbyResult:
    """Construct incumbent adjustments for entrants playing ``strategies``.

    Args:
        config: Unobserved-types configuration
        mutants: Entering mutants with numeric shares
        strategies: Mutant strategy per coalition population
        eta: Optional radius; farther constructions are rejected

    Returns:
        NearbyResult with the verified assignment and its distance to s

    Raises:
        NearbyEquilibriumError: if a share lies outside the construction's bounds
    """
    if config.kind is not RegimeKind.P0:
        return NearbyResult(reason="nearby constructions cover unobserved types only")
    if not all(is_numeric(mutants.share_of(j)) for j in mutants.coalition):
        raise NearbyEquilibriumError("Nearby constructions need numeric shares")
    game = config.game
    incumbents = [list(config.regime.s[i]) for i in range(game.n)]
    constructions = []
    for j in mutants.coalition:
        if len(config.mu.types(j)) != 1:
            return NearbyResult(reason=f"population {j + 1} is polymorphic")
        eps = as_fraction(mutants.share_of(j))
        sigma, mutant = config.s(j, 0), strategies[j]
        if set(mutant.support) <= set(sigma.support):
            incumbents[j][0] = rebalance(sigma, mutant, eps)
            constructions.append("rebalance")
        elif game.n == 2:
            solved = solve_indifference(config, j, mutant, eps)
            if solved is None:
                return NearbyResult(reason=f"no mixture of population {j + 1} keeps its opponent indifferent")
            incumbents[j][0] = solved
            constructions.append("indifference")
        else:
            return NearbyResult(reason=f"mutant of population {j + 1} leaves the incumbent support")

    adjusted = tuple(tuple(x) for x in incumbents)
    assignment = MutantAssignment(unobserved=dict(strategies), incumbents=adjusted)
    try:
        post = config.extend(mutants, assignment)
        report = validate_configuration(post)
    except ConfigurationError as e:
        return NearbyResult(reason=f"post-entry configuration rejected: {str(e)}")
    if not report.ok:
        return NearbyResult(reason=f"not an equilibrium: {report.violation.describe(game)}")
    distance = incumbent_distance(config, adjusted)
    if eta is not None and distance > eta:
        return NearbyResult(reason=f"distance {distance} exceeds {eta}")
    logger.info(f"Nearby equilibrium via {', '.join(constructions)} at distance {distance}")
    return NearbyResult(assignment, distance, tuple(constructions))


def verify_unobservable_assignment(config: Configuration, mutants: MutantSubProfile,
                                   assignment: MutantAssignment) -> AssignmentCheck:
    """Check an arbitrary post-entry assignment for every share vector in [0, 1]^J.

    Returns:
        AssignmentCheck with the equilibrium flag and the incumbents' distance to s
    """
    if config.kind is not RegimeKind.P0:
        raise NearbyEquilibriumError("Assignment checks cover unobserved types only")
    slacks = slack_polynomials(config, mutants, assignment)
    equilibrium = all(holds_on_box(slack.polynomial) for slack in slacks)
    incumbents = assignment.incumbents if assignment.incumbents is not None else config.regime.s
    return AssignmentCheck(equilibrium, incumbent_distance(config, incumbents))
