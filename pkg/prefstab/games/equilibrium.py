"""Nash equilibrium checks, enumeration and coalition refinements."""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import sympy

from ..config import settings
from .exact_lp import solve_linear_system
from .game_core import (
    Game,
    MixedProfile,
    MixedStrategy,
    Profile,
    action_values,
    coalition_payoff_sum,
    expected_payoff,
    grid_weights,
)

logger = logging.getLogger(__name__)


class EquilibriumError(Exception):
    """Exception raised for contract violations in equilibrium checks."""
    pass


class SolverLimitError(EquilibriumError):
    """Raised when a request lies beyond the exact solver's declared limits."""
    pass


class TriState(Enum):
    """Three-valued answer for checks that are not always decidable."""
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class NashSolution:
    """Equilibria found by support enumeration and whether the list is exhaustive."""
    profiles: Tuple[MixedProfile, ...]
    complete: bool


@dataclass(frozen=True)
class NashClassification:
    strict: bool
    completely_mixed: bool
    unique: TriState


def _require_pure(profile: MixedProfile) -> Profile:
    if not profile.is_pure():
        raise EquilibriumError(f"Profile {profile} must be pure")
    return profile.pure_profile()


def is_nash(game: Game, profile: MixedProfile) -> bool:
    """True iff no player gains from a pure unilateral deviation."""
    game.check_profile(profile)
    weights = profile.weights()
    for i in range(game.n):
        values = action_values(game.payoff_table(i), weights, i)
        own = sum(w * v for w, v in zip(weights[i], values))
        if any(v > own for v in values):
            return False
    return True


def is_strict_nash(game: Game, profile: MixedProfile) -> bool:
    """True iff every unilateral pure deviation strictly lowers the deviator's payoff."""
    x = _require_pure(profile)
    for i in range(game.n):
        own = game.payoff(x)[i]
        for a in range(game.sizes[i]):
            if a != x[i] and game.payoff(x[:i] + (a,) + x[i + 1:])[i] >= own:
                return False
    return True


def enumerate_pure_nash(game: Game) -> List[Profile]:
    """All pure Nash equilibria in lexicographic order."""
    return [x for x in game.profiles() if is_nash(game, game.pure(x))]


def _supports(size: int, limit: int) -> Iterator[Tuple[int, ...]]:
    for k in range(1, min(size, limit) + 1):
        yield from itertools.combinations(range(size), k)


def _indifference_system(game: Game, player: int, own: Tuple[int, ...], other: Tuple[int, ...]):
    """Rows making ``player`` indifferent over ``own`` against the opponent's mix on ``other``.

    Unknowns are the opponent's weights on ``other`` followed by the value v.
    """
    opponent = 1 - player
    matrix, rhs = [], []
    for a in own:
        row = []
        for b in other:
            profile = (a, b) if player == 0 else (b, a)
            row.append(game.payoff(profile)[player])
        matrix.append(row + [Fraction(-1)])
        rhs.append(Fraction(0))
    matrix.append([Fraction(1)] * len(other) + [Fraction(0)])
    rhs.append(Fraction(1))
    return matrix, rhs, opponent


def _has_pure_reply_ties(game: Game) -> bool:
    """True iff some pure strategy has two or more pure best replies."""
    for player in range(2):
        opponent = 1 - player
        for b in range(game.sizes[opponent]):
            values = []
            for a in range(game.sizes[player]):
                profile = (a, b) if player == 0 else (b, a)
                values.append(game.payoff(profile)[player])
            if values.count(max(values)) > 1:
                return True
    return False


def _best_reply_count(game: Game, profile: MixedProfile, player: int) -> int:
    values = action_values(game.payoff_table(player), profile.weights(), player)
    return values.count(max(values))


def _solve_two_player(game: Game, limit: int) -> Tuple[List[MixedProfile], bool]:
    """Equal-size support enumeration.

    In a nondegenerate game every equilibrium has supports of equal size, so
    unequal pairs are skipped. Degeneracy clears the completeness flag: a pure
    strategy with tied best replies, a singular equal-size system, or a found
    equilibrium with more best replies than the opponent's support size.
    """
    found: List[MixedProfile] = []
    complete = not _has_pure_reply_ties(game)
    for s1 in _supports(game.sizes[0], limit):
        for s2 in _supports(game.sizes[1], limit):
            if len(s1) != len(s2):
                continue
            strategies = {}
            for player, own, other in ((0, s1, s2), (1, s2, s1)):
                matrix, rhs, opponent = _indifference_system(game, player, own, other)
                solution, unique = solve_linear_system(matrix, rhs)
                if solution is None:
                    break
                if not unique:
                    logger.debug(f"Degenerate support pair {s1}/{s2}; skipped")
                    complete = False
                    break
                mix = solution[:-1]
                if any(w <= 0 for w in mix):
                    break
                weights = [Fraction(0)] * game.sizes[opponent]
                for b, w in zip(other, mix):
                    weights[b] = w
                strategies[opponent] = MixedStrategy(tuple(weights))
            else:
                profile = MixedProfile((strategies[0], strategies[1]))
                if is_nash(game, profile) and profile not in found:
                    found.append(profile)
                    if any(_best_reply_count(game, profile, i) > len(profile[1 - i].support) for i in range(2)):
                        logger.debug(f"Degenerate equilibrium {profile}")
                        complete = False
    return found, complete


def _solve_three_player(game: Game) -> Tuple[List[MixedProfile], bool]:
    found: List[MixedProfile] = []
    complete = True
    for supports in itertools.product(*(_supports(k, 2) for k in game.sizes)):
        symbols = {i: sympy.Symbol(f"x{i + 1}") for i, s in enumerate(supports) if len(s) == 2}
        weights = []
        for i, s in enumerate(supports):
            w = [0] * game.sizes[i]
            if len(s) == 1:
                w[s[0]] = 1
            else:
                w[s[0]] = symbols[i]
                w[s[1]] = 1 - symbols[i]
            weights.append(w)
        equations = []
        for i, s in enumerate(supports):
            if len(s) == 2:
                table = game.payoff_table(i)
                values = action_values(table, weights, i)
                equations.append(sympy.expand(values[s[0]] - values[s[1]]))
        if symbols:
            nontrivial = [e for e in equations if e != 0]
            if len(nontrivial) < len(equations):
                complete = False
            solutions = sympy.solve(nontrivial, list(symbols.values()), dict=True) if nontrivial else [{}]
        else:
            solutions = [{}]
        for solution in solutions:
            values = {}
            exact = True
            for i, symbol in symbols.items():
                value = sympy.nsimplify(solution.get(symbol, symbol))
                if not value.is_Rational:
                    exact = False
                    break
                values[i] = Fraction(int(value.p), int(value.q))
            if not exact:
                complete = False
                continue
            if any(not 0 < v < 1 for v in values.values()):
                continue
            strategies = []
            for i, s in enumerate(supports):
                w = [Fraction(0)] * game.sizes[i]
                if len(s) == 1:
                    w[s[0]] = Fraction(1)
                else:
                    w[s[0]] = values[i]
                    w[s[1]] = 1 - values[i]
                strategies.append(MixedStrategy(tuple(w)))
            profile = MixedProfile(tuple(strategies))
            if is_nash(game, profile) and profile not in found:
                found.append(profile)
    return found, complete


def solve_mixed_nash(game: Game, support_limit: Optional[int] = None) -> NashSolution:
    """Enumerate Nash equilibria with per-player supports of size <= support_limit.

    Two-player games solve exact linear indifference systems per support pair;
    three-player games with supports <= 2 solve the polynomial system with
    sympy. Degenerate systems and irrational solutions clear the completeness flag.

    Args:
        game: The objective game
        support_limit: Largest support size per player (defaults to settings)

    Returns:
        NashSolution with the equilibria and a completeness flag
    """
    limit = settings.SUPPORT_LIMIT if support_limit is None else support_limit
    if limit < 1:
        raise EquilibriumError("support_limit must be >= 1")
    effective = min(limit, max(game.sizes))
    logger.debug(f"Support enumeration on {game!r} with support limit {effective}")

    if game.n == 2:
        profiles, complete = _solve_two_player(game, effective)
    elif game.n == 3 and effective <= 2:
        profiles, complete = _solve_three_player(game)
    elif effective == 1:
        profiles = [game.pure(x) for x in enumerate_pure_nash(game)]
        complete = True
    else:
        raise SolverLimitError(
            f"No exact solver for {game.n} players with supports up to {effective}"
        )
    complete = complete and effective >= max(game.sizes)
    logger.info(f"Found {len(profiles)} equilibria (complete={complete})")
    return NashSolution(tuple(profiles), complete)


def classify_nash(game: Game, profile: MixedProfile, support_limit: Optional[int] = None) -> NashClassification:
    """Classify a Nash equilibrium as strict, completely mixed and/or unique."""
    if not is_nash(game, profile):
        raise EquilibriumError(f"Profile {profile} is not a Nash equilibrium")
    strict = profile.is_pure() and is_strict_nash(game, profile)
    completely_mixed = all(len(s.support) == len(s) for s in profile)

    others = [x for x in enumerate_pure_nash(game) if game.pure(x) != profile]
    if others:
        return NashClassification(strict, completely_mixed, TriState.NO)
    try:
        solution = solve_mixed_nash(game, max(game.sizes))
    except SolverLimitError:
        limit = settings.SUPPORT_LIMIT if support_limit is None else support_limit
        try:
            solution = solve_mixed_nash(game, min(limit, 2 if game.n == 3 else 1))
        except SolverLimitError:
            solution = NashSolution((), False)
        solution = NashSolution(solution.profiles, False)
    if any(p != profile for p in solution.profiles):
        unique = TriState.NO
    else:
        unique = TriState.YES if solution.complete else TriState.UNKNOWN
    return NashClassification(strict, completely_mixed, unique)


def _coalitions(n: int) -> Iterator[Tuple[int, ...]]:
    for k in range(1, n + 1):
        yield from itertools.combinations(range(n), k)


def _coalition_deviations(game: Game, x: Profile, coalition: Sequence[int]) -> Iterator[Profile]:
    for actions in itertools.product(*(range(game.sizes[j]) for j in coalition)):
        profile = list(x)
        for j, a in zip(coalition, actions):
            profile[j] = a
        profile = tuple(profile)
        if profile != x:
            yield profile


def is_aggregate_strong_nash(game: Game, profile: MixedProfile) -> bool:
    """True iff every coalition's pure deviation strictly lowers its payoff sum."""
    x = _require_pure(profile)
    for coalition in _coalitions(game.n):
        base = coalition_payoff_sum(game, coalition, profile)
        for deviation in _coalition_deviations(game, x, coalition):
            if sum(game.payoff(deviation)[j] for j in coalition) >= base:
                return False
    return True


def deviants_all_worse(game: Game, profile: MixedProfile) -> bool:
    """True iff every pure deviation makes every deviating player strictly worse."""
    x = _require_pure(profile)
    base = game.payoff(x)
    for a in game.profiles():
        movers = [j for j in range(game.n) if a[j] != x[j]]
        if movers and any(game.payoff(a)[j] >= base[j] for j in movers):
            return False
    return True


def _coalition_grid(game: Game, x: Profile, coalition: Sequence[int], resolution: int) -> Optional[List[List[MixedStrategy]]]:
    options = [[MixedStrategy(w) for w in grid_weights(game.sizes[j], resolution)] for j in coalition]
    total = 1
    for o in options:
        total *= len(o)
    if total > settings.MAX_GRID_PROFILES:
        logger.debug(f"Skipping grid deviations of coalition {coalition}: {total} profiles")
        return None
    return options


def is_strictly_strong_nash(game: Game, profile: MixedProfile, grid_resolution: Optional[int] = None) -> TriState:
    """Tri-state test of the strictly strong Nash property.

    NO is certified by a pure or grid deviation that hurts no coalition member.
    YES is certified per coalition either by the aggregate sum condition or by
    a member who is strictly worse under every pure deviation of the coalition.
    """
    x = _require_pure(profile)
    resolution = settings.GRID_RESOLUTION if grid_resolution is None else grid_resolution
    base = game.payoff(x)
    decided = True
    for coalition in _coalitions(game.n):
        deviations = list(_coalition_deviations(game, x, coalition))
        for deviation in deviations:
            if all(game.payoff(deviation)[j] >= base[j] for j in coalition):
                return TriState.NO

        options = _coalition_grid(game, x, coalition, resolution)
        if options is not None:
            pure_x = game.pure(x)
            for combo in itertools.product(*options):
                candidate = pure_x
                for j, strategy in zip(coalition, combo):
                    candidate = candidate.replace(j, strategy)
                if candidate == pure_x:
                    continue
                values = expected_payoff(game, candidate)
                if all(values[j] >= base[j] for j in coalition):
                    return TriState.NO

        total = sum(base[j] for j in coalition)
        sum_drops = all(sum(game.payoff(d)[j] for j in coalition) < total for d in deviations)
        common_victim = any(all(game.payoff(d)[k] < base[k] for d in deviations) for k in coalition)
        if not (sum_drops or common_victim):
            decided = False
    return TriState.YES if decided else TriState.UNKNOWN
