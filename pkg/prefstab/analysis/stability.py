"""Stability verdicts for configurations under the three observability regimes.

Stable is only reported through a sufficiency route whose premises were
checked exactly; Unstable only with a re-verifiable invader certificate or an
instability route whose premises hold; everything else is Unknown.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from ..games.efficiency import DominanceRelation, find_dominator
from ..games.equilibrium import SolverLimitError, TriState, classify_nash
from ..games.game_core import MixedStrategy
from ..populations.configuration import (
    Configuration,
    MutantSubProfile,
    RegimeKind,
    aggregate_outcome,
    is_balanced,
    is_numeric,
)
from .barriers import (
    aggregate_strong_route,
    deviation_barrier,
    dominant_focal_route,
    pairwise_route,
    two_player_efficient_route,
)
from .certificates import InvaderCertificate
from .invaders import (
    coalitions,
    deviation_invader,
    dominator_invader,
    indifferent_mutants,
    mismatch_invader,
    pareto_invader,
    partial_deviation_invader,
    search_coalition,
)
from .nearby import NearbyEquilibriumError, nearby_equilibrium
from .options import AnalysisOptions
from .thresholds import ObservabilityThresholds, ThresholdError, observability_thresholds

logger = logging.getLogger(__name__)

# Mutant share at which pure entries are tested for nearby post-entry equilibria
NEARBY_SURVEY_SHARE = Fraction(1, 100)
NEARBY_SURVEY_LIMIT = 64


class StabilityError(Exception):
    """Exception raised for errors in stability analysis."""
    pass


class Verdict(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    UNKNOWN = "unknown"


class Route(Enum):
    """How a verdict was reached."""
    UNBALANCED = "unbalanced"
    DOMINATED_OUTCOME = "dominated-outcome"
    FITNESS_MISMATCH = "fitness-mismatch"
    EFFICIENT_STRICT_NASH = "efficient-strict-nash"
    AGGREGATE_STRONG_NASH = "aggregate-strong-nash"
    PAIRWISE_BOUNDING = "pairwise-bounding"
    PROFITABLE_DEVIATION = "profitable-deviation"
    MATERIALIST_NASH = "materialist-nash"
    DOMINANT_FOCAL = "dominant-focal"
    OBSERVABILITY_DOMINATOR = "observability-dominator"
    OBSERVABILITY_DEVIATION = "observability-deviation"
    SEARCH = "search"
    NONE = "none"


class UnknownReason(Enum):
    SEARCH_EXHAUSTED = "search-exhausted"
    SOLVER_LIMIT = "solver-limit"


@dataclass(frozen=True)
class StabilityVerdict:
    verdict: Verdict
    route: Route
    premises: Tuple[str, ...] = ()
    barrier: Optional[Fraction] = None
    certificate: Optional[InvaderCertificate] = None
    reason: Optional[UnknownReason] = None
    thresholds: Optional[ObservabilityThresholds] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def stable(cls, route: Route, premises: List[str], barrier: Optional[Fraction] = None, **details) -> "StabilityVerdict":
        return cls(Verdict.STABLE, route, tuple(premises), barrier, details=details)

    @classmethod
    def unstable(cls, route: Route, premises: List[str], certificate: Optional[InvaderCertificate] = None,
                 **kwargs) -> "StabilityVerdict":
        return cls(Verdict.UNSTABLE, route, tuple(premises), certificate=certificate, **kwargs)

    @classmethod
    def unknown(cls, reason: UnknownReason, premises: List[str], **kwargs) -> "StabilityVerdict":
        return cls(Verdict.UNKNOWN, Route.NONE, tuple(premises), reason=reason, **kwargs)


def search_order(n: int) -> List[Tuple[int, ...]]:
    """The grand coalition first, then the smaller ones by size and lexicographically."""
    grand = tuple(range(n))
    return [grand] + [c for c in coalitions(n) if c != grand]


def _search(config: Configuration, options: AnalysisOptions) -> Tuple[Optional[InvaderCertificate], bool]:
    """Search coalitions in ``search_order`` and stop at the first certificate.

    Results are consumed in order, so the answer does not depend on the
    number of threads. Coalitions not yet started are cancelled.

    Returns:
        (first certificate or None, whether some coalition hit a cap)
    """
    def run(coalition):
        try:
            return search_coalition(config, coalition, options), False
        except SolverLimitError as e:
            logger.warning(f"Coalition {tuple(j + 1 for j in coalition)}: {str(e)}")
            return None, True

    limited = False
    with ThreadPoolExecutor(max_workers=max(1, options.threads)) as pool:
        futures = [pool.submit(run, coalition) for coalition in search_order(config.game.n)]
        for future in futures:
            certificate, hit = future.result()
            limited = limited or hit
            if certificate is not None:
                for pending in futures:
                    pending.cancel()
                return certificate, limited
    return None, limited


def _search_verdict(config: Configuration, options: AnalysisOptions, premises: List[str], **kwargs) -> StabilityVerdict:
    certificate, limited = _search(config, options)
    if certificate is not None:
        return StabilityVerdict.unstable(Route.SEARCH, premises + ["search found an invader"], certificate, **kwargs)
    reason = UnknownReason.SOLVER_LIMIT if limited else UnknownReason.SEARCH_EXHAUSTED
    return StabilityVerdict.unknown(reason, premises, **kwargs)


def _check_observed(config: Configuration, options: AnalysisOptions) -> StabilityVerdict:
    if not is_balanced(config):
        return StabilityVerdict.unstable(Route.UNBALANCED, ["incumbent types earn unequal fitness"])

    dominated, certificate = pareto_invader(config, options)
    if certificate is not None:
        return StabilityVerdict.unstable(Route.DOMINATED_OUTCOME, ["an observed outcome is Pareto dominated"], certificate)
    _, certificate = mismatch_invader(config, options)
    if certificate is not None:
        return StabilityVerdict.unstable(Route.FITNESS_MISMATCH, ["a type's fitness varies across equally rewarded matches"], certificate)

    premises = ["balanced"]
    if dominated:
        premises.append("dominated outcome found but its invader did not certify")
    barrier = aggregate_strong_route(config)
    if barrier is not None:
        return StabilityVerdict.stable(Route.AGGREGATE_STRONG_NASH, premises + [
            "aggregate strong Nash outcome", "incumbents have it strictly dominant"], barrier)
    if two_player_efficient_route(config):
        return StabilityVerdict.stable(Route.EFFICIENT_STRICT_NASH, premises + [
            "two populations", "Pareto-efficient strict Nash outcome", "incumbents have it strictly dominant"])
    route = pairwise_route(config)
    if route is not None:
        recomputed = {f"deviation_barrier_{i + 1}": deviation_barrier(config, i) for i in range(2)}
        return StabilityVerdict.stable(Route.PAIRWISE_BOUNDING, premises + [
            "two-by-two monomorphic configuration", "Pareto-efficient pure outcome",
            f"loss ratios {route.ratios[0]}, {route.ratios[1]} with supporting weight {route.weight}"],
            route.barrier, ratios=route.ratios, weight=route.weight, **recomputed)
    return _search_verdict(config, options, premises)


def nearby_survey(config: Configuration, share: Fraction = NEARBY_SURVEY_SHARE) -> Dict[str, Any]:
    """Try a nearby post-entry equilibrium for every pure entry of indifferent mutants.

    Every population receives mutants at ``share``. Found equilibria keep the
    entrants from disrupting play but do not decide the fitness comparison.

    Returns:
        Verdict details: one line per entry profile and the number found
    """
    game = config.game
    coalition = tuple(range(game.n))
    entries = list(game.profiles())
    if len(entries) > NEARBY_SURVEY_LIMIT:
        return {"nearby": f"skipped: {len(entries)} pure entries"}
    mutants = MutantSubProfile(coalition, indifferent_mutants(config, coalition), tuple(share for _ in coalition))
    lines, found = [], 0
    for x in entries:
        strategies = {j: MixedStrategy.pure(game.sizes[j], x[j]) for j in coalition}
        try:
            result = nearby_equilibrium(config, mutants, strategies)
        except NearbyEquilibriumError as e:
            lines.append(f"{game.label(x)}: {str(e)}")
            continue
        if result.found:
            found += 1
            lines.append(f"{game.label(x)}: {', '.join(result.constructions)} at distance {result.distance}")
        else:
            lines.append(f"{game.label(x)}: {result.reason}")
    logger.debug(f"Nearby equilibria for {found} of {len(entries)} pure entries")
    return {"nearby": lines, "nearby_found": found, "nearby_share": share}


def _check_unobserved(config: Configuration, options: AnalysisOptions) -> StabilityVerdict:
    game = config.game
    profitable, certificate = deviation_invader(config, options)
    if profitable:
        premises = ["aggregate outcome is not a Nash equilibrium"]
        return StabilityVerdict.unstable(Route.PROFITABLE_DEVIATION, premises, certificate)

    x = aggregate_outcome(config).product
    premises = ["aggregate outcome is a Nash equilibrium"]
    if all(t.is_materialist(game) for i in range(game.n) for t in config.mu.types(i)):
        try:
            classification = classify_nash(game, x, options.support_limit)
        except SolverLimitError as e:
            logger.info(f"Uniqueness undecided: {str(e)}")
            classification = None
        if classification is not None:
            if classification.strict:
                return StabilityVerdict.stable(Route.MATERIALIST_NASH, premises + ["materialist", "strict"])
            if classification.completely_mixed and config.mu.is_monomorphic():
                return StabilityVerdict.stable(Route.MATERIALIST_NASH, premises + ["materialist", "completely mixed", "monomorphic"])
            if classification.unique is TriState.YES:
                return StabilityVerdict.stable(Route.MATERIALIST_NASH, premises + ["materialist", "unique"])
    barrier = dominant_focal_route(config)
    if barrier is not None:
        return StabilityVerdict.stable(Route.DOMINANT_FOCAL, premises + [
            "incumbents have the outcome strictly dominant", "deviating groups contain a strict member or deviate neutrally"], barrier)
    return _search_verdict(config, options, premises, details=nearby_survey(config))


def _check_partial(config: Configuration, options: AnalysisOptions) -> StabilityVerdict:
    game = config.game
    p = config.regime.p
    a_star = aggregate_outcome(config).pure_profile()
    if a_star is None:
        return _search_verdict(config, options, ["aggregate outcome is not pure"])

    dominator, relation = find_dominator(game, game.pure(a_star), options.grid_resolution, strong_only=True)
    if relation is not DominanceRelation.STRONG:
        dominator = None
    try:
        thresholds = observability_thresholds(game, a_star, dominator)
    except ThresholdError as e:
        logger.debug(f"No observability thresholds: {str(e)}")
        thresholds = None

    if thresholds is not None and thresholds.above_high(p):
        premises = [f"strong dominator {dominator}", f"p = {p} above {thresholds.high}"]
        certificate = dominator_invader(config, dominator, options)
        return StabilityVerdict.unstable(Route.OBSERVABILITY_DOMINATOR, premises, certificate, thresholds=thresholds)
    if thresholds is not None and thresholds.below_low(p):
        player, action = thresholds.deviation
        premises = [f"{game.action_sets[player][action]} is profitable for population {player + 1}",
                    f"p = {p} below {thresholds.low}"]
        certificate = partial_deviation_invader(config, player, action, options)
        return StabilityVerdict.unstable(Route.OBSERVABILITY_DEVIATION, premises, certificate, thresholds=thresholds)

    premises = [f"pure outcome {game.label(a_star)}"]
    barrier = aggregate_strong_route(config)
    if barrier is not None:
        return StabilityVerdict.stable(Route.AGGREGATE_STRONG_NASH, premises + [
            "aggregate strong Nash outcome", "incumbents have it strictly dominant"], barrier)
    if two_player_efficient_route(config):
        return StabilityVerdict.stable(Route.EFFICIENT_STRICT_NASH, premises + [
            "two populations", "Pareto-efficient strict Nash outcome", "incumbents have it strictly dominant"])
    return _search_verdict(config, options, premises, thresholds=thresholds)


def check_stability(config: Configuration, options: Optional[AnalysisOptions] = None) -> StabilityVerdict:
    """Decide stability of a validated configuration.

    Args:
        config: Configuration with numeric shares (and numeric p)
        options: Grid resolution, caps and comparison mode

    Returns:
        StabilityVerdict (Stable, Unstable or Unknown with its reason)

    Raises:
        StabilityError: on symbolic input or unexpected analysis failures
    """
    options = options or AnalysisOptions()
    if config.mu.is_symbolic() or (config.kind is RegimeKind.PARTIAL and not is_numeric(config.regime.p)):
        raise StabilityError("Stability checks need numeric shares and p")
    try:
        if config.kind is RegimeKind.P1:
            verdict = _check_observed(config, options)
        elif config.kind is RegimeKind.P0:
            verdict = _check_unobserved(config, options)
        else:
            verdict = _check_partial(config, options)
    except StabilityError:
        raise
    except Exception as e:
        logger.error(f"Error checking stability: {str(e)}")
        raise StabilityError(f"Failed to check stability: {str(e)}")
    logger.info(f"Verdict {verdict.verdict.value} via {verdict.route.value}")
    return verdict


def uniform_invasion_barrier(config: Configuration, route: Route) -> Optional[Fraction]:
    """Recompute the barrier a Stable route provides.

    Returns:
        The barrier, or None for routes that prove stability without one

    Raises:
        StabilityError: if the route's premises fail on ``config``
    """
    if route is Route.PAIRWISE_BOUNDING:
        result = pairwise_route(config)
        if result is None:
            raise StabilityError("Pairwise bounding does not apply")
        return result.barrier
    if route is Route.AGGREGATE_STRONG_NASH:
        barrier = aggregate_strong_route(config)
    elif route is Route.DOMINANT_FOCAL:
        barrier = dominant_focal_route(config)
    elif route in (Route.EFFICIENT_STRICT_NASH, Route.MATERIALIST_NASH):
        return None
    else:
        raise StabilityError(f"Route {route.value} does not prove stability")
    if barrier is None:
        raise StabilityError(f"Route {route.value} does not apply")
    return barrier
