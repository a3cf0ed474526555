"""Pareto dominance and efficiency classification with exact LP certificates.

Efficiency is certified on the convex hull of the payoff region (correlated
strategies) by an exact simplex; inefficiency is witnessed by an explicit
product-strategy dominator found among pure and grid profiles.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Tuple

from tqdm import tqdm

from ..config import settings
from .exact_lp import LPStatus, maximize
from .game_core import Game, GameError, MixedProfile, expected_payoff, product_grid

logger = logging.getLogger(__name__)


class EfficiencyError(Exception):
    """Exception raised for errors in efficiency classification."""
    pass


class DominanceRelation(Enum):
    """How one profile's payoff vector compares with another's."""
    NONE = "none"
    WEAK = "weak"      # >= everywhere, > somewhere
    STRONG = "strong"  # > everywhere


class EfficiencyStatus(Enum):
    """Outcome of the two-phase efficiency decision."""
    PARETO_EFFICIENT = "pareto_efficient"
    WEAKLY_EFFICIENT_ONLY = "weakly_efficient_only"  # weak efficiency certified, no dominator found
    DOMINATED = "dominated"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EfficiencyReport:
    status: EfficiencyStatus
    dominator: Optional[MixedProfile] = None
    relation: DominanceRelation = DominanceRelation.NONE
    weakly_efficient: Optional[bool] = None
    correlated_gain: Fraction = Fraction(0)
    strict_slack: Fraction = Fraction(0)


def compare_payoffs(values: Tuple[Fraction, ...], reference: Tuple[Fraction, ...]) -> DominanceRelation:
    if all(v > r for v, r in zip(values, reference)):
        return DominanceRelation.STRONG
    if all(v >= r for v, r in zip(values, reference)) and any(v > r for v, r in zip(values, reference)):
        return DominanceRelation.WEAK
    return DominanceRelation.NONE


def dominance_relation(game: Game, sigma: MixedProfile, sigma_prime: MixedProfile) -> DominanceRelation:
    """Whether ``sigma`` weakly or strongly Pareto dominates ``sigma_prime``."""
    return compare_payoffs(expected_payoff(game, sigma), expected_payoff(game, sigma_prime))


def _correlated_lp(game: Game, target: Tuple[Fraction, ...], uniform_slack: bool) -> Fraction:
    """Largest total (or uniform) payoff gain over ``target`` reachable by a correlated strategy."""
    profiles = list(game.profiles())
    n_slack = 1 if uniform_slack else game.n
    a_ub, b_ub = [], []
    for i in range(game.n):
        row = [-game.payoff(p)[i] for p in profiles]
        slack = [Fraction(0)] * n_slack
        slack[0 if uniform_slack else i] = Fraction(1)
        a_ub.append(row + slack)
        b_ub.append(-target[i])
    a_eq = [[Fraction(1)] * len(profiles) + [Fraction(0)] * n_slack]
    cost = [Fraction(0)] * len(profiles) + [Fraction(1)] * n_slack
    result = maximize(cost, a_ub, b_ub, a_eq, [Fraction(1)])
    if result.status is not LPStatus.OPTIMAL:
        raise EfficiencyError(f"Efficiency LP ended {result.status.value}")
    return result.value


def _candidates(game: Game, resolution: int) -> Iterator[MixedProfile]:
    for x in game.profiles():
        yield game.pure(x)
    try:
        grid = list(product_grid(game, resolution))
    except GameError as e:
        logger.info(f"Grid dominator search skipped: {str(e)}")
        return
    for candidate in tqdm(grid, desc="dominator search", disable=not settings.SHOW_PROGRESS):
        if not candidate.is_pure():
            yield candidate


def find_dominator(game: Game, sigma: MixedProfile, grid_resolution: Optional[int] = None,
                   strong_only: bool = False) -> Tuple[Optional[MixedProfile], DominanceRelation]:
    """First strong dominator among pure then grid profiles, else the first weak one."""
    resolution = settings.GRID_RESOLUTION if grid_resolution is None else grid_resolution
    reference = expected_payoff(game, sigma)
    weak = None
    for candidate in _candidates(game, resolution):
        relation = compare_payoffs(expected_payoff(game, candidate), reference)
        if relation is DominanceRelation.STRONG:
            return candidate, relation
        if relation is DominanceRelation.WEAK and weak is None and not strong_only:
            weak = candidate
    if weak is not None:
        return weak, DominanceRelation.WEAK
    return None, DominanceRelation.NONE


def efficiency_status(game: Game, sigma: MixedProfile, grid_resolution: Optional[int] = None) -> EfficiencyReport:
    """Classify ``sigma`` against the product-strategy payoff region.

    Args:
        game: The objective game
        sigma: Profile under test
        grid_resolution: Grid step 1/resolution for the dominator search

    Returns:
        EfficiencyReport with status, optional dominator certificate and weak-efficiency flag
    """
    game.check_profile(sigma)
    try:
        reference = expected_payoff(game, sigma)
        gain = _correlated_lp(game, reference, uniform_slack=False)
        logger.debug(f"Correlated gain over {sigma}: {gain}")
        if gain == 0:
            return EfficiencyReport(EfficiencyStatus.PARETO_EFFICIENT, weakly_efficient=True)

        slack = _correlated_lp(game, reference, uniform_slack=True)
        dominator, relation = find_dominator(game, sigma, grid_resolution)
        if relation is DominanceRelation.STRONG:
            return EfficiencyReport(EfficiencyStatus.DOMINATED, dominator, relation, False, gain, slack)
        weakly = True if slack == 0 else None
        if relation is DominanceRelation.WEAK:
            return EfficiencyReport(EfficiencyStatus.DOMINATED, dominator, relation, weakly, gain, slack)
        if weakly:
            return EfficiencyReport(EfficiencyStatus.WEAKLY_EFFICIENT_ONLY, None, relation, True, gain, slack)
        return EfficiencyReport(EfficiencyStatus.UNKNOWN, None, relation, None, gain, slack)
    except EfficiencyError:
        raise
    except Exception as e:
        logger.error(f"Error classifying efficiency of {sigma}: {str(e)}")
        raise EfficiencyError(f"Failed to classify efficiency: {str(e)}")
