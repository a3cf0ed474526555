"""Stability routes that come with an explicit uniform invasion barrier.

Each route checks its premises on a configuration and, when they hold,
returns the barrier: mutant shares below it (in every entering population)
can never be certified as invaders. A route returning None does not apply.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import sympy

from ..games.efficiency import EfficiencyStatus, efficiency_status
from ..games.equilibrium import _coalition_deviations, _coalitions, is_aggregate_strong_nash
from ..games.game_core import Game, Profile, expected_value
from ..populations.configuration import Configuration, RegimeKind, as_fraction
from .polynomials import eps_symbol, to_sympy

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]  # (mutant weight on a*_i, incumbent weight on a*_{-i})


class BarrierError(Exception):
    """Exception raised when a barrier is requested for a route that does not apply."""
    pass


def focal_profile(config: Configuration) -> Optional[Profile]:
    """The pure profile every incumbent match plays, if there is one."""
    outcomes = set()
    if config.kind in (RegimeKind.P1, RegimeKind.PARTIAL):
        for theta in config.mu.joint_support():
            profile = config.b(theta)
            if not profile.is_pure():
                return None
            outcomes.add(profile.pure_profile())
    if config.kind in (RegimeKind.P0, RegimeKind.PARTIAL):
        for i in range(config.game.n):
            actions = set()
            for k in range(len(config.mu.types(i))):
                strategy = config.s(i, k)
                if not strategy.is_pure():
                    return None
                actions.add(strategy.pure_action())
            if len(actions) != 1:
                return None
        unobserved = tuple(config.s(i, 0).pure_action() for i in range(config.game.n))
        outcomes.add(unobserved)
    return outcomes.pop() if len(outcomes) == 1 else None


def all_types_dominant(config: Configuration, a_star: Profile) -> bool:
    """True iff every incumbent type has a*_i as its strictly dominant action."""
    return all(
        t.strictly_dominant_action() == a_star[i]
        for i in range(config.game.n) for t in config.mu.types(i)
    )


def max_loss(game: Game, a_star: Profile) -> Fraction:
    """Largest fitness any player can lose relative to a*."""
    base = game.payoff(a_star)
    return max(max(base[j] - game.payoff(a)[j], Fraction(0)) for j in range(game.n) for a in game.profiles())


def aggregate_strong_barrier(game: Game, a_star: Profile) -> Fraction:
    """Barrier min_M m_M / (m_M + (n - |M|) G) of an aggregate strong Nash outcome.

    m_M is the smallest drop of the coalition's payoff sum under a pure
    deviation of M, and G the largest individual loss relative to a*.

    Raises:
        BarrierError: if a* is not an aggregate strong Nash equilibrium
    """
    if not is_aggregate_strong_nash(game, game.pure(a_star)):
        raise BarrierError(f"{game.label(a_star)} is not an aggregate strong Nash equilibrium")
    n = game.n
    base = game.payoff(a_star)
    loss = max_loss(game, a_star)
    barrier = Fraction(1)
    if loss == 0:
        return barrier
    for coalition in _coalitions(n):
        drops = [sum(base[j] - game.payoff(a)[j] for j in coalition) for a in _coalition_deviations(game, a_star, coalition)]
        if not drops:
            continue
        m = min(drops)
        barrier = min(barrier, m / (m + (n - len(coalition)) * loss))
    return barrier


def aggregate_strong_route(config: Configuration) -> Optional[Fraction]:
    """Observed types: dominant incumbents at an aggregate strong Nash outcome."""
    a_star = focal_profile(config)
    if a_star is None or not all_types_dominant(config, a_star):
        return None
    if not is_aggregate_strong_nash(config.game, config.game.pure(a_star)):
        return None
    return aggregate_strong_barrier(config.game, a_star)


def strict_margin(game: Game, a_star: Profile, player: int) -> Fraction:
    """pi_j(a*) minus the best unilateral deviation payoff (<= 0 when not strict)."""
    base = game.payoff(a_star)[player]
    alternatives = [game.payoff(a_star[:player] + (a,) + a_star[player + 1:])[player]
                    for a in range(game.sizes[player]) if a != a_star[player]]
    return base - max(alternatives) if alternatives else Fraction(0)


def _neutral_deviation(game: Game, a_star: Profile, members: Tuple[int, ...]) -> bool:
    """Every pure deviation of ``members`` leaves each mover's payoff as if it had stayed."""
    for actions in itertools.product(*(range(game.sizes[j]) for j in members)):
        profile = list(a_star)
        for j, a in zip(members, actions):
            profile[j] = a
        for j in members:
            if profile[j] == a_star[j]:
                continue
            stayed = list(profile)
            stayed[j] = a_star[j]
            if game.payoff(tuple(profile))[j] != game.payoff(tuple(stayed))[j]:
                return False
    return True


def dominant_focal_route(config: Configuration) -> Optional[Fraction]:
    """Unobserved types: dominant incumbents at a focal outcome where deviating
    groups either contain a strict member or deviate neutrally.

    Returns:
        Barrier m / (2 (n - 1) R), or None when the premises fail
    """
    game = config.game
    a_star = focal_profile(config)
    if a_star is None or not all_types_dominant(config, a_star):
        return None
    margins = [strict_margin(game, a_star, j) for j in range(game.n)]
    strict = [j for j in range(game.n) if margins[j] > 0]
    for members in _coalitions(game.n):
        if any(j in strict for j in members):
            continue
        if not _neutral_deviation(game, a_star, members):
            logger.debug(f"Deviation of {tuple(j + 1 for j in members)} is neither strict nor neutral")
            return None
    if not strict or game.n == 1:
        return Fraction(1)
    m = min(margins[j] for j in strict)
    spread = max(game.max_payoff(j) - game.min_payoff(j) for j in range(game.n))
    return min(Fraction(1), m / (2 * (game.n - 1) * spread))


def two_player_efficient_route(config: Configuration) -> bool:
    """Two populations, dominant incumbents at a Pareto-efficient strict Nash outcome."""
    game = config.game
    a_star = focal_profile(config)
    if game.n != 2 or a_star is None or not all_types_dominant(config, a_star):
        return False
    if any(strict_margin(game, a_star, j) <= 0 for j in range(2)):
        return False
    return efficiency_status(game, game.pure(a_star)).status is EfficiencyStatus.PARETO_EFFICIENT


# ---------------------------------------------------------------------------
# Pairwise bounding for two-by-two games with observed types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairwiseRoute:
    """Loss ratios per population and the supporting weight behind the barrier."""
    ratios: Tuple[Fraction, Fraction]
    weight: Fraction
    barrier: Fraction


class _PairwiseGeometry:
    """Reply sets of an incumbent facing a mutant that mixes q on a*_i."""

    def __init__(self, config: Configuration, population: int, a_star: Profile):
        self.config = config
        self.game = config.game
        self.i = population
        self.other = 1 - population
        self.a_star = a_star
        self.table = config.mu.types(self.other)[0].table
        d0, d1 = self.subjective_gap(Fraction(0)), self.subjective_gap(Fraction(1))
        if d0 == 0 and d1 == 0:
            raise BarrierError(f"Incumbent of population {self.other + 1} is indifferent against every mutant")
        self.breakpoint = d0 / (d0 - d1) if d0 != d1 and 0 <= d0 / (d0 - d1) <= 1 else None

    def weights(self, point: Point) -> List[Tuple[Fraction, ...]]:
        q, r = point
        weights = [None, None]
        own = [Fraction(0)] * 2
        own[self.a_star[self.i]] = q
        own[1 - self.a_star[self.i]] = 1 - q
        reply = [Fraction(0)] * 2
        reply[self.a_star[self.other]] = r
        reply[1 - self.a_star[self.other]] = 1 - r
        weights[self.i] = tuple(own)
        weights[self.other] = tuple(reply)
        return weights

    def subjective_gap(self, q: Fraction) -> Fraction:
        """Incumbent's subjective utility of a*_{-i} minus the other action."""
        return (expected_value(self.table, self.weights((q, Fraction(1))))
                - expected_value(self.table, self.weights((q, Fraction(0)))))

    def payoff(self, point: Point, player: int) -> Fraction:
        return expected_value(self.game.payoff_table(player), self.weights(point))

    def segments(self) -> List[Tuple[Point, Point]]:
        cuts = [Fraction(0), Fraction(1)]
        if self.breakpoint is not None and 0 < self.breakpoint < 1:
            cuts.insert(1, self.breakpoint)
        pieces = []
        for lo, hi in zip(cuts, cuts[1:]):
            r = Fraction(1) if self.subjective_gap((lo + hi) / 2) > 0 else Fraction(0)
            pieces.append(((lo, r), (hi, r)))
        return pieces

    def pieces(self) -> List[Tuple[Point, Point]]:
        """Open segments with a fixed reply and the breakpoint where any reply is optimal."""
        pieces = self.segments()
        if self.breakpoint is not None:
            pieces.append(((self.breakpoint, Fraction(0)), (self.breakpoint, Fraction(1))))
        return pieces

    def best_payoff(self, q: Fraction) -> Fraction:
        """Mutant's best payoff against incumbent replies at q (the limit from below at q = 1)."""
        if q != 1 and q == self.breakpoint:
            return max(self.payoff((q, r), self.i) for r in (Fraction(0), Fraction(1)))
        for (lo, r), (hi, _) in self.segments():
            if lo <= q <= hi:
                return self.payoff((q, r), self.i)
        raise BarrierError(f"Mutant weight {q} outside [0, 1]")


def _pairwise_premises(config: Configuration) -> Optional[Profile]:
    game = config.game
    if config.kind is not RegimeKind.P1 or game.n != 2 or game.sizes != (2, 2):
        return None
    if not config.mu.is_monomorphic():
        return None
    a_star = focal_profile(config)
    if a_star is None:
        return None
    if efficiency_status(game, game.pure(a_star)).status is not EfficiencyStatus.PARETO_EFFICIENT:
        return None
    return a_star


def loss_ratio(config: Configuration, population: int, a_star: Profile) -> Optional[Fraction]:
    """Largest incumbent-of-the-other-population loss per unit of own mutant loss.

    None when a mutant can match or beat the incumbent against incumbents
    while imposing a loss on the other population.
    """
    geometry = _PairwiseGeometry(config, population, a_star)
    i, other = population, 1 - population
    v = config.game.payoff(a_star)
    ratio = Fraction(0)
    for piece in geometry.pieces():
        for point in piece:
            g = v[i] - geometry.payoff(point, i)
            h = v[other] - geometry.payoff(point, other)
            if g < 0 or (g == 0 and h > 0):
                return None
            if g > 0:
                ratio = max(ratio, h / g)
    return ratio


def supporting_weights(game: Game, a_star: Profile) -> Optional[Tuple[Fraction, Optional[Fraction]]]:
    """Range [low, high] of t > 0 with d_1 + t d_2 <= 0 for every payoff gain vector d."""
    base = game.payoff(a_star)
    low, high = Fraction(0), None
    for a in game.profiles():
        d1, d2 = (game.payoff(a)[j] - base[j] for j in range(2))
        if d2 > 0:
            bound = -d1 / d2
            high = bound if high is None else min(high, bound)
        elif d2 < 0:
            low = max(low, -d1 / d2)
        elif d1 > 0:
            return None
    if high is not None and (high <= 0 or high < low):
        return None
    return low, high


def pairwise_route(config: Configuration) -> Optional[PairwiseRoute]:
    """Stable with a barrier when losses in both populations can be traded off.

    Let mutants enter with shares e1, e2. Against incumbents a mutant of
    population i loses g_i >= 0 and costs the other incumbents h_{-i}; among
    themselves the mutants reach v + d for some gain vector d of the payoff
    region. Mutant minus incumbent fitness is then

        D1 = -(1 - e2) g1 + e2 (d1 + h1)
        D2 = -(1 - e1) g2 + e1 (d2 + h2)

    With h1 <= r2 g2 and h2 <= r1 g1 (the loss ratios r_i) and d1 + t d2 <= 0
    (a supporting weight t, which extends from pure to mixed gains by
    linearity):

        D1 / e2 + t D2 / e1 <= g1 (t r1 - (1 - e2) / e2) + g2 (r2 - t (1 - e1) / e1)

    Both brackets are negative once e2 < 1 / (1 + t r1) and
    e1 < 1 / (1 + r2 / t), so the mutants cannot be ahead in both
    populations. The barrier is the maximum over the candidate weights t of
    the smaller bound; ``deviation_barrier`` bounds one population at a time.

    Returns:
        PairwiseRoute, or None when the premises or the bounds fail
    """
    a_star = _pairwise_premises(config)
    if a_star is None:
        return None
    try:
        ratios = tuple(loss_ratio(config, i, a_star) for i in range(2))
    except BarrierError as e:
        logger.debug(f"Pairwise route declined: {str(e)}")
        return None
    if any(r is None for r in ratios):
        return None
    support = supporting_weights(config.game, a_star)
    if support is None:
        return None
    low, high = support
    candidates = [Fraction(1) if high is None else min(high, Fraction(1))]
    candidates[0] = max(candidates[0], low)
    if low > 0:
        candidates.append(low)
    if high is not None:
        candidates.append(high)
    if ratios[0] > 0 and ratios[1] > 0:
        balance = sympy.sqrt(to_sympy(ratios[1] / ratios[0]))
        if balance.is_Rational:
            t = Fraction(int(balance.p), int(balance.q))
            if t >= low and (high is None or t <= high):
                candidates.append(t)

    def barrier(t: Fraction) -> Fraction:
        return min(1 / (1 + t * ratios[0]), 1 / (1 + ratios[1] / t))

    best = max((t for t in candidates if t > 0), key=barrier)
    logger.info(f"Pairwise route at {config.game.label(a_star)}: ratios {ratios}, weight {best}, barrier {barrier(best)}")
    return PairwiseRoute(ratios, best, barrier(best))


def pairwise_bounds(config: Configuration, population: int, q) -> Tuple[sympy.Expr, sympy.Expr]:
    """Incumbent lower and mutant upper fitness bounds when the mutant mixes q on a*_i.

    Returns:
        (L, U) in the other population's share eps: L = (1 - eps) v_i + eps min pi_i,
        U = (1 - eps) w_i(q) + eps max pi_i
    """
    a_star = _pairwise_premises(config)
    if a_star is None:
        raise BarrierError("Pairwise bounds need a monomorphic two-by-two configuration at a Pareto-efficient pure outcome")
    game = config.game
    q = as_fraction(q)
    geometry = _PairwiseGeometry(config, population, a_star)
    eps = eps_symbol(1 - population)
    v = to_sympy(game.payoff(a_star)[population])
    w = to_sympy(geometry.best_payoff(q))
    lower = sympy.expand((1 - eps) * v + eps * to_sympy(game.min_payoff(population)))
    upper = sympy.expand((1 - eps) * w + eps * to_sympy(game.max_payoff(population)))
    return lower, upper


def deviation_barrier(config: Configuration, population: int) -> Optional[Fraction]:
    """Share of the other population below which every non-committing mutant
    (weight on a*_i below 1) is strictly outperformed by the incumbents.

    Returns:
        min (v - w) / ((v - w) + (max pi_i - min pi_i)), or None when a gap vanishes
    """
    a_star = _pairwise_premises(config)
    if a_star is None:
        return None
    game = config.game
    geometry = _PairwiseGeometry(config, population, a_star)
    v = game.payoff(a_star)[population]
    spread = game.max_payoff(population) - game.min_payoff(population)
    vertices = [point for (lo, r), (hi, _) in geometry.segments() if lo < 1 for point in ((lo, r), (hi, r))]
    if geometry.breakpoint is not None and geometry.breakpoint < 1:
        vertices += [(geometry.breakpoint, Fraction(0)), (geometry.breakpoint, Fraction(1))]
    barrier = None
    for point in vertices:
        gap = v - geometry.payoff(point, population)
        if gap <= 0:
            return None
        value = gap / (gap + spread)
        barrier = value if barrier is None else min(barrier, value)
    return barrier
