"""Invader constructions and the bounded search for mutant sub-profiles.

Constructive routes build the mutants used in the instability arguments
(dominated outcomes, fitness mismatches, profitable deviations, dominators
under partial observability). The search enumerates indifferent mutants with
pure and grid-refined assignments; finding nothing proves nothing.
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from ..config import settings
from ..games.efficiency import EfficiencyStatus, efficiency_status, find_dominator
from ..games.equilibrium import SolverLimitError
from ..games.game_core import (
    GameError,
    MixedProfile,
    MixedStrategy,
    action_values,
    expected_payoff,
    expected_value,
    grid_weights,
)
from ..populations.configuration import (
    Configuration,
    MutantAssignment,
    PreferenceType,
    RegimeKind,
    TypeProfile,
    aggregate_mixed_profile,
    as_fraction,
)
from .certificates import (
    ComparisonMode,
    InvaderCertificate,
    certify,
    mimic_assignment,
    mimic_profile,
    mutant_count,
    mutant_matches,
    symbolic_mutants,
)
from .options import AnalysisOptions

logger = logging.getLogger(__name__)

Poly = List[Fraction]


class InvaderSearchError(Exception):
    """Exception raised for invalid invader search requests."""
    pass


def indifferent_mutant(config: Configuration, population: int) -> PreferenceType:
    """A constant-utility type distinct from every incumbent of ``population``."""
    taken = {t.values[0] for t in config.mu.types(population) if t.is_indifferent()}
    value = next(v for v in itertools.count() if Fraction(v) not in taken)
    return PreferenceType.indifferent(config.game, population, value, name=f"indifferent-mutant{population + 1}")


def indifferent_mutants(config: Configuration, coalition: Sequence[int]) -> Tuple[PreferenceType, ...]:
    return tuple(indifferent_mutant(config, j) for j in coalition)


def dominant_mutant(config: Configuration, population: int, action: int) -> Optional[PreferenceType]:
    mutant = PreferenceType.dominant(config.game, population, action)
    if mutant in config.mu.types(population):
        return None
    return mutant


def _check_coalition(config: Configuration, coalition: Sequence[int]) -> Tuple[int, ...]:
    coalition = tuple(sorted(set(coalition)))
    if not coalition:
        raise InvaderSearchError("Coalition must be nonempty")
    if any(not 0 <= j < config.game.n for j in coalition):
        raise InvaderSearchError(f"Coalition {coalition} names unknown populations")
    return coalition


# ---------------------------------------------------------------------------
# Constructive routes
# ---------------------------------------------------------------------------

def pareto_invader(config: Configuration, options: AnalysisOptions) -> Tuple[bool, Optional[InvaderCertificate]]:
    """Indifferent mutants in every population that mimic a matched type profile
    with a dominated outcome and play its dominator among themselves.

    Returns:
        (some observed outcome is dominated, certificate or None)
    """
    game = config.game
    everyone = tuple(range(game.n))
    dominated = False
    for theta in config.mu.joint_support():
        report = efficiency_status(game, config.b(theta), options.grid_resolution)
        if report.status is not EfficiencyStatus.DOMINATED:
            continue
        dominated = True
        assignment = mimic_assignment(config, everyone, dict(enumerate(theta)))
        observed = dict(assignment.observed)
        observed[tuple(config.mu.support_sizes())] = report.dominator
        assignment = MutantAssignment(observed, assignment.unobserved)
        mutants = symbolic_mutants(everyone, indifferent_mutants(config, everyone))
        certificate = certify(config, mutants, assignment, options.mode, route="dominated-outcome")
        if certificate is not None:
            return True, certificate
    return dominated, None


def mismatch_invader(config: Configuration, options: AnalysisOptions) -> Tuple[bool, Optional[InvaderCertificate]]:
    """A single-population mutant exploiting unequal fitness across its own population's matches.

    When, against some opponent types, incumbents of population j earn different
    fitness, the mutant copies the better-off type against those opponents and a
    worse-off type everywhere else.

    Returns:
        (a mismatch was found, certificate or None)
    """
    game, mu = config.game, config.mu
    found = False
    for j in range(game.n):
        sizes = list(mu.support_sizes())
        sizes[j] = 1
        for rest in itertools.product(*(range(k) for k in sizes)):
            values = []
            for k in range(len(mu.types(j))):
                theta = rest[:j] + (k,) + rest[j + 1:]
                values.append(config.match_payoff(theta)[j])
            if len(set(values)) == 1:
                continue
            found = True
            best = values.index(max(values))
            worst = values.index(min(values))
            observed = {}
            for theta in mutant_matches(config, (j,)):
                others = theta[:j] + (0,) + theta[j + 1:]
                target = best if others == rest[:j] + (0,) + rest[j + 1:] else worst
                observed[theta] = config.b(theta[:j] + (target,) + theta[j + 1:])
            mutants = symbolic_mutants((j,), (indifferent_mutant(config, j),))
            certificate = certify(config, mutants, MutantAssignment(observed), options.mode, route="fitness-mismatch")
            if certificate is not None:
                return True, certificate
            logger.debug(f"Mismatch construction in population {j + 1} against {rest} did not certify")
    return found, None


def deviation_invader(config: Configuration, options: AnalysisOptions) -> Tuple[bool, Optional[InvaderCertificate]]:
    """Unobserved types: a mutant with a strictly dominant profitable deviation.

    Returns:
        (the aggregate outcome admits a profitable deviation, certificate or None)
    """
    game = config.game
    mixtures = [tuple(as_fraction(w) for w in mix) for mix in aggregate_mixed_profile(config)]
    found = False
    for i in range(game.n):
        values = action_values(game.payoff_table(i), mixtures, i)
        current = expected_value(game.payoff_table(i), mixtures)
        for action, value in enumerate(values):
            if value <= current:
                continue
            found = True
            mutant = dominant_mutant(config, i, action)
            if mutant is None:
                continue
            assignment = MutantAssignment(unobserved={i: MixedStrategy.pure(game.sizes[i], action)})
            mutants = symbolic_mutants((i,), (mutant,))
            certificate = certify(config, mutants, assignment, options.mode, route="profitable-deviation")
            if certificate is not None:
                return True, certificate
    return found, None


def dominator_invader(config: Configuration, sigma: MixedProfile, options: AnalysisOptions) -> Optional[InvaderCertificate]:
    """Partial observability: indifferent mutants in every population that mimic
    the incumbents except when they recognise each other, where they play ``sigma``."""
    everyone = tuple(range(config.game.n))
    assignment = mimic_assignment(config, everyone)
    observed = dict(assignment.observed)
    observed[tuple(config.mu.support_sizes())] = sigma
    mutants = symbolic_mutants(everyone, indifferent_mutants(config, everyone))
    return certify(config, mutants, MutantAssignment(observed, assignment.unobserved), options.mode,
                   route="observability-dominator")


def partial_deviation_invader(config: Configuration, population: int, action: int,
                              options: AnalysisOptions) -> Optional[InvaderCertificate]:
    """Partial observability: a mutant committed to a profitable deviation.

    Observing incumbents may answer the mutant with any pure reply; the first
    reply profile that keeps the post-entry play an equilibrium is used.
    """
    game = config.game
    mutant = dominant_mutant(config, population, action)
    if mutant is None:
        return None
    mutants = symbolic_mutants((population,), (mutant,))
    matches = mutant_matches(config, (population,))
    others = [i for i in range(game.n) if i != population]
    for replies in itertools.product(*(range(game.sizes[i]) for i in others)):
        profile = [0] * game.n
        profile[population] = action
        for i, a in zip(others, replies):
            profile[i] = a
        pure = game.pure(tuple(profile))
        assignment = MutantAssignment(
            observed={theta: pure for theta in matches},
            unobserved={population: MixedStrategy.pure(game.sizes[population], action)},
        )
        certificate = certify(config, mutants, assignment, options.mode, route="observability-deviation")
        if certificate is not None:
            return certificate
    return None


# ---------------------------------------------------------------------------
# Search with types observed
# ---------------------------------------------------------------------------

def _poly_add(target: Poly, poly: Poly, scale: Fraction) -> None:
    for d, c in enumerate(poly):
        if c:
            target[d] += scale * c


def _poly_mul(a: Poly, b: Poly) -> Poly:
    result = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                result[i + j] += x * y
    return result


def _lowest(poly: Sequence[Fraction], upto: Optional[int] = None) -> Optional[Fraction]:
    for c in poly[:upto]:
        if c != 0:
            return c
    return None


class ObservedSearch:
    """Depth-first search over assignments to mutant matches, types observed.

    Matches are processed by number of mutants. Along eps_j = t a match with
    m mutants only moves coefficients of degree >= m - 1, so after the layer
    with m mutants the coefficients below degree m are final and a negative
    lowest one prunes the branch.
    """

    def __init__(self, config: Configuration, coalition: Sequence[int], options: AnalysisOptions):
        self.config = config
        self.game = config.game
        self.coalition = tuple(coalition)
        self.options = options
        self.incumbents = config.mu.support_sizes()
        self.mutants = indifferent_mutants(config, self.coalition)
        self.matches = mutant_matches(config, self.coalition)
        self.keys = [(j, k) for j in self.coalition for k in range(self.incumbents[j])]
        self.nodes = 0
        self._options_cache: Dict[TypeProfile, List[Tuple[MixedProfile, Tuple[Fraction, ...]]]] = {}
        self._dominators: Optional[List[MixedProfile]] = None

    def _share(self, population: int, k: int) -> Poly:
        if population not in self.coalition:
            return [as_fraction(self.config.mu.share(population, k))]
        if k == self.incumbents[population]:
            return [Fraction(0), Fraction(1)]
        share = as_fraction(self.config.mu.share(population, k))
        return [share, -share]

    def _weight(self, theta: TypeProfile, population: int) -> Poly:
        weight = [Fraction(1)]
        for i, k in enumerate(theta):
            if i != population:
                weight = _poly_mul(weight, self._share(i, k))
        return weight

    def _contribute(self, diffs: Dict[Tuple[int, int], Poly], theta: TypeProfile,
                    payoff: Tuple[Fraction, ...], sign: int) -> None:
        for j in self.coalition:
            weight = self._weight(theta, j)
            if theta[j] == self.incumbents[j]:
                for k in range(self.incumbents[j]):
                    _poly_add(diffs[(j, k)], weight, sign * payoff[j])
            else:
                _poly_add(diffs[(j, theta[j])], weight, -sign * payoff[j])

    def _base(self) -> Dict[Tuple[int, int], Poly]:
        size = len(self.coalition) + 1
        diffs = {key: [Fraction(0)] * size for key in self.keys}
        for theta in self.config.mu.joint_support():
            self._contribute(diffs, theta, self.config.match_payoff(theta), 1)
        return diffs

    def _incumbents_reply(self, theta: TypeProfile, weights: Sequence[Sequence[Fraction]], movers: Sequence[int]) -> bool:
        for i in range(self.game.n):
            if i in movers:
                continue
            table = self.config.mu.types(i)[theta[i]].table
            values = action_values(table, weights, i)
            own = sum(w * v for w, v in zip(weights[i], values))
            if max(values) > own:
                return False
        return True

    def _dominator_options(self) -> List[MixedProfile]:
        if self._dominators is None:
            self._dominators = []
            if len(self.coalition) == self.game.n:
                for theta in self.config.mu.joint_support():
                    try:
                        dominator, _ = find_dominator(self.game, self.config.b(theta), self.options.grid_resolution)
                    except GameError:
                        dominator = None
                    if dominator is not None and dominator not in self._dominators:
                        self._dominators.append(dominator)
        return self._dominators

    def options_for(self, theta: TypeProfile) -> List[Tuple[MixedProfile, Tuple[Fraction, ...]]]:
        """Mimicking profiles first, then pure profiles with incumbent Nash replies,
        then (all-mutant matches only) dominators and grid mixtures."""
        if theta in self._options_cache:
            return self._options_cache[theta]
        game = self.game
        movers = [j for j in self.coalition if theta[j] == self.incumbents[j]]
        others = [i for i in range(game.n) if i not in movers]
        profiles: List[MixedProfile] = []
        seen = set()

        def add(profile: MixedProfile) -> None:
            if profile not in seen:
                seen.add(profile)
                profiles.append(profile)

        for choice in itertools.product(*(range(self.incumbents[j]) for j in movers)):
            add(self.config.b(mimic_profile(self.config, theta, dict(zip(movers, choice)))))
        for profile in game.profiles():
            pure = game.pure(profile)
            if self._incumbents_reply(theta, pure.weights(), movers):
                add(pure)
        if len(movers) == len(self.coalition):
            if not others:
                for dominator in self._dominator_options():
                    add(dominator)
            per_mover = [[MixedStrategy(w) for w in grid_weights(game.sizes[j], self.options.grid_resolution)]
                         for j in movers]
            total = 1
            for items in per_mover:
                total *= len(items)
            for i in others:
                total *= game.sizes[i]
            if total <= self.options.max_grid_profiles:
                replies_of = [[MixedStrategy.pure(game.sizes[i], a) for a in range(game.sizes[i])] for i in others]
                for combo in itertools.product(*per_mover):
                    if all(s.is_pure() for s in combo):
                        continue
                    for replies in itertools.product(*replies_of):
                        strategies = [None] * game.n
                        for j, s in zip(movers, combo):
                            strategies[j] = s
                        for i, s in zip(others, replies):
                            strategies[i] = s
                        if self._incumbents_reply(theta, [s.weights for s in strategies], movers):
                            add(MixedProfile(tuple(strategies)))
            else:
                logger.debug(f"Grid assignments for match {theta} skipped: {total} candidates")
        options = [(p, expected_payoff(game, p)) for p in profiles]
        self._options_cache[theta] = options
        return options

    def _pruned(self, diffs: Dict[Tuple[int, int], Poly], final_below: int) -> bool:
        for polynomial in self._compared(diffs):
            lowest = _lowest(polynomial, final_below)
            if lowest is not None and lowest < 0:
                return True
        return False

    def _compared(self, diffs: Dict[Tuple[int, int], Poly]) -> List[Poly]:
        if self.options.mode is ComparisonMode.PER_POPULATION:
            return list(diffs.values())
        groups = [[diffs[(j, k)] for k in range(self.incumbents[j])] for j in self.coalition]
        sums = []
        for combo in itertools.product(*groups):
            total = [Fraction(0)] * len(combo[0])
            for polynomial in combo:
                _poly_add(total, polynomial, Fraction(1))
            sums.append(total)
        return sums

    def _accepts(self, diffs: Dict[Tuple[int, int], Poly]) -> bool:
        compared = self._compared(diffs)
        if all(_lowest(p) is None for p in compared):
            return False
        return all(_lowest(p) is None or _lowest(p) > 0 for p in compared)

    def run(self) -> Optional[InvaderCertificate]:
        """Depth-first search; raises SolverLimitError beyond the node cap."""
        diffs = self._base()
        chosen: Dict[TypeProfile, MixedProfile] = {}
        mutants = symbolic_mutants(self.coalition, self.mutants)
        progress = tqdm(total=None, desc=f"coalition {tuple(j + 1 for j in self.coalition)}",
                        disable=not settings.SHOW_PROGRESS)

        def descend(index: int) -> Optional[InvaderCertificate]:
            if index == len(self.matches):
                if not self._accepts(diffs):
                    return None
                return certify(self.config, mutants, MutantAssignment(dict(chosen)), self.options.mode)
            theta = self.matches[index]
            layer = mutant_count(self.config, theta)
            closes_layer = index + 1 == len(self.matches) or mutant_count(self.config, self.matches[index + 1]) != layer
            for profile, payoff in self.options_for(theta):
                self.nodes += 1
                progress.update(1)
                if self.nodes > self.options.max_nodes:
                    raise SolverLimitError(f"Invader search exceeded {self.options.max_nodes} nodes (PREFSTAB_MAX_SEARCH_NODES)")
                self._contribute(diffs, theta, payoff, 1)
                chosen[theta] = profile
                if not (closes_layer and self._pruned(diffs, layer)):
                    found = descend(index + 1)
                    if found is not None:
                        return found
                del chosen[theta]
                self._contribute(diffs, theta, payoff, -1)
            return None

        try:
            return descend(0)
        finally:
            progress.close()
            logger.debug(f"Coalition {self.coalition}: {self.nodes} search nodes")


# ---------------------------------------------------------------------------
# Search with types unobserved or partially observed
# ---------------------------------------------------------------------------

def _search_unobserved(config: Configuration, coalition: Tuple[int, ...], options: AnalysisOptions) -> Optional[InvaderCertificate]:
    game = config.game
    mutants = symbolic_mutants(coalition, indifferent_mutants(config, coalition))
    candidates = list(itertools.product(*(range(game.sizes[j]) for j in coalition)))
    if len(candidates) > options.max_nodes:
        raise SolverLimitError(f"{len(candidates)} mutant strategy profiles exceed the node cap")
    for actions in candidates:
        assignment = MutantAssignment(unobserved={j: MixedStrategy.pure(game.sizes[j], a) for j, a in zip(coalition, actions)})
        certificate = certify(config, mutants, assignment, options.mode)
        if certificate is not None:
            return certificate
    return None


def _search_partial(config: Configuration, coalition: Tuple[int, ...], options: AnalysisOptions) -> Optional[InvaderCertificate]:
    """Secret handshakes: mutants mimic incumbents unless they recognise each other."""
    game = config.game
    if len(coalition) != game.n:
        return None
    base = mimic_assignment(config, coalition)
    together = tuple(config.mu.support_sizes())
    candidates: List[MixedProfile] = []
    for theta in config.mu.joint_support():
        dominator, _ = find_dominator(game, config.b(theta), options.grid_resolution)
        if dominator is not None and dominator not in candidates:
            candidates.append(dominator)
    for profile in game.profiles():
        pure = game.pure(profile)
        if pure not in candidates:
            candidates.append(pure)
    if len(candidates) > options.max_nodes:
        raise SolverLimitError(f"{len(candidates)} handshake profiles exceed the node cap")
    mutants = symbolic_mutants(coalition, indifferent_mutants(config, coalition))
    for sigma in candidates:
        observed = dict(base.observed)
        observed[together] = sigma
        certificate = certify(config, mutants, MutantAssignment(observed, base.unobserved), options.mode,
                              route="secret-handshake")
        if certificate is not None:
            return certificate
    return None


def search_coalition(config: Configuration, coalition: Sequence[int],
                     options: Optional[AnalysisOptions] = None) -> Optional[InvaderCertificate]:
    """Search one coalition; raises SolverLimitError when the caps are hit."""
    options = options or AnalysisOptions()
    coalition = _check_coalition(config, coalition)
    logger.debug(f"Searching invaders for coalition {tuple(j + 1 for j in coalition)}")
    if config.kind is RegimeKind.P1:
        return ObservedSearch(config, coalition, options).run()
    if config.kind is RegimeKind.P0:
        return _search_unobserved(config, coalition, options)
    return _search_partial(config, coalition, options)


def find_invader(config: Configuration, coalition: Sequence[int],
                 options: Optional[AnalysisOptions] = None) -> Optional[InvaderCertificate]:
    """First certificate for ``coalition`` over indifferent mutants and enumerated assignments.

    Args:
        config: Validated configuration
        coalition: Nonempty set of populations receiving mutants
        options: Grid resolution and search caps

    Returns:
        InvaderCertificate, or None on exhaustion (which is not a stability proof)
    """
    try:
        return search_coalition(config, coalition, options)
    except SolverLimitError as e:
        logger.warning(f"Invader search stopped: {str(e)}")
        return None


def coalitions(n: int) -> List[Tuple[int, ...]]:
    """Nonempty coalitions by size, then lexicographically."""
    return [c for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]
