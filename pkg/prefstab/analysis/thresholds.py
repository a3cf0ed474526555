"""Observability thresholds for pure outcomes under partial observability.

Above the high threshold, mutants that play a strong dominator among
themselves outperform the incumbents; below the low threshold, a mutant
committed to a profitable deviation does. Both are roots of polynomials in
the degree of observability p and are returned as exact sympy numbers.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import sympy

from ..games.efficiency import DominanceRelation, dominance_relation
from ..games.game_core import MixedProfile, Profile, expected_value
from ..games.equilibrium import is_nash
from .polynomials import to_sympy

logger = logging.getLogger(__name__)

P = sympy.Symbol("p", positive=True)


class ThresholdError(Exception):
    """Exception raised when a threshold's premise does not hold."""
    pass


@dataclass(frozen=True)
class ObservabilityThresholds:
    """Exact thresholds; either side is None when its premise fails."""
    high: Optional[sympy.Expr] = None
    low: Optional[sympy.Expr] = None
    dominator: Optional[MixedProfile] = None
    deviation: Optional[Tuple[int, int]] = None  # (population, action)

    def above_high(self, p) -> bool:
        return self.high is not None and bool(to_sympy(p) > self.high)

    def below_low(self, p) -> bool:
        return self.low is not None and bool(to_sympy(p) < self.low)


def _payoff(game, weights, player) -> sympy.Expr:
    return to_sympy(expected_value(game.payoff_table(player), weights))


def dominator_advantage(game, a_star: Profile, sigma: MixedProfile, player: int) -> sympy.Poly:
    """Limit fitness advantage of player ``player``'s mutant playing ``sigma`` when recognised.

    Each population observes independently with probability p; the ignorant
    set T falls back to a*.
    """
    n = game.n
    star = MixedProfile.pure(game.sizes, a_star).weights()
    sigma_weights = sigma.weights()
    base = _payoff(game, star, player)
    total = 0
    for size in range(n):
        for ignorant in itertools.combinations(range(n), size):
            weights = [star[i] if i in ignorant else sigma_weights[i] for i in range(n)]
            total += P ** (n - size) * (1 - P) ** size * (_payoff(game, weights, player) - base)
    return sympy.Poly(sympy.expand(total), P, domain="QQ")


def deviation_advantage(game, a_star: Profile, player: int, action: int) -> sympy.Poly:
    """Worst-case limit advantage of a mutant committed to ``action``.

    Observing opponents may answer with any pure profile; ignorant ones keep a*.
    """
    n = game.n
    others = [i for i in range(n) if i != player]
    base = _payoff(game, MixedProfile.pure(game.sizes, a_star).weights(), player)
    total = -base
    for size in range(len(others) + 1):
        for ignorant in itertools.combinations(others, size):
            observing = [i for i in others if i not in ignorant]
            worst = None
            for replies in itertools.product(*(range(game.sizes[i]) for i in observing)):
                profile = list(a_star)
                profile[player] = action
                for i, a in zip(observing, replies):
                    profile[i] = a
                value = to_sympy(game.payoff(tuple(profile))[player])
                worst = value if worst is None else sympy.Min(worst, value)
            total += P ** (len(others) - size) * (1 - P) ** size * worst
    return sympy.Poly(sympy.expand(total), P, domain="QQ")


def _roots_in(poly: sympy.Poly, low_closed: bool) -> List[sympy.Expr]:
    if poly.is_zero:
        return []
    roots = []
    for root in sympy.real_roots(poly):
        if (root >= 0 if low_closed else root > 0) and root < 1:
            roots.append(root)
    return roots


def dominator_threshold(game, a_star: Profile, sigma: MixedProfile) -> sympy.Expr:
    """Smallest p-bar such that every player's dominator advantage is positive on (p-bar, 1].

    Raises:
        ThresholdError: if ``sigma`` does not strongly dominate a*
    """
    if dominance_relation(game, sigma, MixedProfile.pure(game.sizes, a_star)) is not DominanceRelation.STRONG:
        raise ThresholdError(f"{sigma} does not strongly dominate {game.label(a_star)}")
    high = sympy.Integer(0)
    for player in range(game.n):
        roots = _roots_in(dominator_advantage(game, a_star, sigma, player), low_closed=True)
        if roots:
            high = sympy.Max(high, max(roots))
    return high


def deviation_threshold(game, a_star: Profile, player: int, action: int) -> sympy.Expr:
    """Largest p-bar such that the committed deviation's advantage is positive on [0, p-bar).

    Raises:
        ThresholdError: if ``action`` is not a profitable deviation from a*
    """
    advantage = deviation_advantage(game, a_star, player, action)
    if advantage.eval(0) <= 0:
        raise ThresholdError(f"{game.action_sets[player][action]} is not a profitable deviation "
                             f"for population {player + 1} at {game.label(a_star)}")
    roots = _roots_in(advantage, low_closed=False)
    return min(roots) if roots else sympy.Integer(1)


def profitable_deviations(game, a_star: Profile) -> List[Tuple[int, int]]:
    """(population, action) pairs that strictly improve on a*, lexicographically."""
    found = []
    for player in range(game.n):
        current = game.payoff(a_star)[player]
        for action in range(game.sizes[player]):
            profile = a_star[:player] + (action,) + a_star[player + 1:]
            if game.payoff(profile)[player] > current:
                found.append((player, action))
    return found


def observability_thresholds(game, a_star: Profile, dominator: Optional[MixedProfile] = None,
                             deviations: Optional[Sequence[Tuple[int, int]]] = None) -> ObservabilityThresholds:
    """Both thresholds for the pure outcome a*.

    Args:
        game: The objective game
        a_star: Pure outcome
        dominator: Strong dominator of a*, if one is known
        deviations: Profitable deviations to consider (all by default)

    Returns:
        ObservabilityThresholds; ``low`` is the largest over the deviations

    Raises:
        ThresholdError: if a* is a Nash equilibrium and no dominator is given
    """
    high = None
    if dominator is not None:
        high = dominator_threshold(game, a_star, dominator)
    low, chosen = None, None
    if not is_nash(game, game.pure(a_star)):
        for player, action in (profitable_deviations(game, a_star) if deviations is None else deviations):
            value = deviation_threshold(game, a_star, player, action)
            if low is None or bool(value > low):
                low, chosen = value, (player, action)
    if high is None and low is None:
        raise ThresholdError(f"No dominator and no profitable deviation at {game.label(a_star)}")
    logger.debug(f"Observability thresholds at {game.label(a_star)}: high={high}, low={low}")
    return ObservabilityThresholds(high, low, dominator, chosen)
