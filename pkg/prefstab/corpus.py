"""Regression corpus: the bundled scenarios replayed against their known results.

Every scenario under ``data/scenarios`` is checked against its ``expect``
block (validation, balance, verdict, route, barrier). Scenarios with further
quoted facts register extra checks below with ``@corpus_check``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import sympy

from .analysis.barriers import deviation_barrier, pairwise_bounds
from .analysis.certificates import fitness_diff_polynomials, mimic_assignment, verify_certificate
from .analysis.invaders import find_invader
from .analysis.nearby import nearby_equilibrium, verify_unobservable_assignment
from .analysis.options import AnalysisOptions
from .analysis.polynomials import T, eps_symbol, holds_on_box
from .analysis.stability import StabilityVerdict, check_stability
from .analysis.thresholds import observability_thresholds
from .dynamics.replicator import simulate
from .games.efficiency import DominanceRelation, EfficiencyStatus, efficiency_status
from .games.equilibrium import deviants_all_worse, is_aggregate_strong_nash, is_strict_nash
from .games.game_core import MixedStrategy, coalition_payoff_sum, expected_value
from .populations.configuration import (
    MutantSubProfile,
    PreferenceType,
    average_fitness,
    is_balanced,
    validate_configuration,
)
from .populations.scenario import Scenario, load_scenario
from .reporting import CheckModel, CorpusModel

logger = logging.getLogger(__name__)

SCENARIO_DIR = Path(__file__).parent / "data" / "scenarios"


class CorpusError(Exception):
    """Exception raised when the corpus cannot be loaded."""
    pass


@dataclass
class CorpusContext:
    """A loaded scenario with the path it came from and the analysis options."""
    path: Path
    scenario: Scenario
    options: AnalysisOptions
    _verdict: Optional[StabilityVerdict] = None

    def verdict(self) -> StabilityVerdict:
        if self._verdict is None:
            self._verdict = check_stability(self.scenario.config, self.options)
        return self._verdict

    def at(self, p: str) -> Scenario:
        """The same scenario under another degree of observability."""
        return load_scenario(self.path, p)


CheckFunction = Callable[[CorpusContext], Tuple[bool, str]]

_CHECKS: Dict[str, List[Tuple[str, CheckFunction]]] = {}


def corpus_check(scenario: str, name: str) -> Callable[[CheckFunction], CheckFunction]:
    """Register an extra check for the scenario named ``scenario``."""
    def register(function: CheckFunction) -> CheckFunction:
        _CHECKS.setdefault(scenario, []).append((name, function))
        return function
    return register


def scenario_paths(filter_text: Optional[str] = None) -> List[Path]:
    paths = sorted(SCENARIO_DIR.glob("*.json"))
    if not paths:
        raise CorpusError(f"No scenarios found in {SCENARIO_DIR}")
    if filter_text:
        paths = [p for p in paths if filter_text in p.stem]
    return paths


def _expectations(context: CorpusContext) -> List[Tuple[str, bool, str]]:
    scenario = context.scenario
    expect = scenario.expect
    results = []
    if "validate" in expect:
        report = validate_configuration(scenario.config)
        actual = "ok" if report.ok else "violation"
        results.append(("validate", actual == expect["validate"], actual))
    if "balanced" in expect:
        actual = str(is_balanced(scenario.config)).lower()
        results.append(("balanced", actual == expect["balanced"], actual))
    if any(key in expect for key in ("verdict", "route", "reason", "barrier")):
        verdict = context.verdict()
        if "verdict" in expect:
            results.append(("verdict", verdict.verdict.value == expect["verdict"], verdict.verdict.value))
        if "route" in expect:
            results.append(("route", verdict.route.value == expect["route"], verdict.route.value))
        if "reason" in expect:
            actual = verdict.reason.value if verdict.reason is not None else "none"
            results.append(("reason", actual == expect["reason"], actual))
        if "barrier" in expect:
            results.append(("barrier", str(verdict.barrier) == expect["barrier"], str(verdict.barrier)))
        if verdict.certificate is not None:
            verified = verify_certificate(scenario.config, verdict.certificate)
            results.append(("certificate re-verifies", verified, verdict.certificate.route))
    return results


def run_corpus(filter_text: Optional[str] = None, options: Optional[AnalysisOptions] = None) -> CorpusModel:
    """Replay every bundled scenario whose name contains ``filter_text``.

    Returns:
        CorpusModel with one entry per check; failures never raise
    """
    options = options or AnalysisOptions()
    checks: List[CheckModel] = []
    for path in scenario_paths(filter_text):
        scenario = load_scenario(path)
        context = CorpusContext(path, scenario, options)
        try:
            for name, passed, detail in _expectations(context):
                checks.append(CheckModel(scenario=scenario.name, check=name, passed=passed, detail=detail))
        except Exception as e:
            logger.error(f"Error replaying {scenario.name}: {str(e)}")
            checks.append(CheckModel(scenario=scenario.name, check="expectations", passed=False, detail=str(e)))
        for name, function in _CHECKS.get(path.stem, []):
            try:
                passed, detail = function(context)
            except Exception as e:
                logger.error(f"Check {name!r} of {scenario.name} failed: {str(e)}")
                passed, detail = False, f"error: {str(e)}"
            checks.append(CheckModel(scenario=scenario.name, check=name, passed=bool(passed), detail=detail))
    passed = sum(1 for c in checks if c.passed)
    logger.info(f"Corpus: {passed} of {len(checks)} checks passed")
    return CorpusModel(passed=passed, failed=len(checks) - passed, checks=checks)


def _grid(resolution: int = 10) -> List[Fraction]:
    return [Fraction(k, resolution) for k in range(resolution + 1)]


# ---------------------------------------------------------------------------
# Battle of the Sexes
# ---------------------------------------------------------------------------

@corpus_check("ex1_battle_of_sexes", "incumbent fitness is 5")
def _ex1_fitness(context: CorpusContext) -> Tuple[bool, str]:
    config = context.scenario.config
    values = [average_fitness(config, i, 0) for i in range(2)]
    return all(v == 5 for v in values), str(values)


@corpus_check("ex1_battle_of_sexes", "male bounds 5(1-eps2) and 2q(1-eps2)+15eps2")
def _ex1_bounds(context: CorpusContext) -> Tuple[bool, str]:
    config = context.scenario.config
    eps2 = eps_symbol(1)
    for q in _grid()[:-1]:
        lower, upper = pairwise_bounds(config, 0, q)
        q_expr = sympy.Rational(q.numerator, q.denominator)
        if sympy.expand(lower - 5 * (1 - eps2)) != 0 or sympy.expand(upper - (2 * q_expr * (1 - eps2) + 15 * eps2)) != 0:
            return False, f"q={q}: {lower}, {upper}"
        gap = lower - upper
        if not (gap.subs(eps2, 0) > 0 and gap.subs(eps2, sympy.Rational(3, 18)) >= 0):
            return False, f"q={q}: bounds cross below 3/18"
    return True, "q in {0, 1/10, ..., 9/10}"


@corpus_check("ex1_battle_of_sexes", "male deviation barrier is 3/18")
def _ex1_deviation_barrier(context: CorpusContext) -> Tuple[bool, str]:
    barrier = deviation_barrier(context.scenario.config, 0)
    return barrier == Fraction(3, 18), str(barrier)


# ---------------------------------------------------------------------------
# Asymmetric coordination
# ---------------------------------------------------------------------------

@corpus_check("ex2_coordination_a11a21", "(a11,a21) strict, weakly efficient, weakly dominated")
def _ex2_efficiency(context: CorpusContext) -> Tuple[bool, str]:
    game = context.scenario.game
    profile = game.pure("a11,a21")
    report = efficiency_status(game, profile, context.options.grid_resolution)
    passed = (is_strict_nash(game, profile) and report.status is EfficiencyStatus.DOMINATED
              and report.relation is DominanceRelation.WEAK and report.weakly_efficient is True)
    return passed, f"{report.status.value}, {report.relation.value}, dominator {report.dominator}"


@corpus_check("ex2_coordination_a11a21", "both populations find an invader")
def _ex2_invader(context: CorpusContext) -> Tuple[bool, str]:
    certificate = find_invader(context.scenario.config, (0, 1), context.options)
    if certificate is None:
        return False, "no certificate"
    return verify_certificate(context.scenario.config, certificate), str(certificate.difference(1))


@corpus_check("ex2_coordination_a12a22", "(a12,a22) is aggregate strong Nash")
def _ex2_aggregate_strong(context: CorpusContext) -> Tuple[bool, str]:
    game = context.scenario.game
    return is_aggregate_strong_nash(game, game.pure("a12,a22")), "a12,a22"


@corpus_check("ex2_coordination_a12a22", "stable under partial observability")
def _ex2_partial(context: CorpusContext) -> Tuple[bool, str]:
    verdicts = {}
    for p in ("1/10", "1/2", "9/10"):
        verdicts[p] = check_stability(context.at(p).config, context.options).verdict.value
    return all(v == "stable" for v in verdicts.values()), str(verdicts)


# ---------------------------------------------------------------------------
# Three-player examples
# ---------------------------------------------------------------------------

def _diagonal_differences(context: CorpusContext, expected: sympy.Expr) -> Tuple[bool, str]:
    scenario = context.scenario
    differences = fitness_diff_polynomials(scenario.config, scenario.mutants, scenario.assignment)
    diagonals = [d.polynomial.diagonal().as_expr() for d in differences]
    return all(sympy.expand(d - expected) == 0 for d in diagonals), ", ".join(map(str, diagonals))


@corpus_check("ex3_bilateral_deviation", "listed assignment gains 7 eps^2")
def _ex3_differences(context: CorpusContext) -> Tuple[bool, str]:
    return _diagonal_differences(context, 7 * T ** 2)


@corpus_check("ex3_bilateral_deviation", "mutant shares grow under replicator dynamics")
def _ex3_dynamics(context: CorpusContext) -> Tuple[bool, str]:
    scenario = context.scenario
    points = simulate(scenario.config, scenario.mutants, scenario.assignment, 1)
    grown = [points[1].shares[i][1] > points[0].shares[i][1] for i in range(3)]
    return all(grown), str(grown)


@corpus_check("ex4_deviants_worse", "listed assignment gains eps + 6 eps^2")
def _ex4_differences(context: CorpusContext) -> Tuple[bool, str]:
    return _diagonal_differences(context, T + 6 * T ** 2)


@corpus_check("ex4_deviants_worse", "every deviation hurts every deviant")
def _ex4_deviants(context: CorpusContext) -> Tuple[bool, str]:
    game = context.scenario.game
    profile = game.pure("a11,a21,a31")
    total = coalition_payoff_sum(game, (0, 1), profile)
    return deviants_all_worse(game, profile) and total == 14, f"pair payoff {total}"


# ---------------------------------------------------------------------------
# Unobserved types
# ---------------------------------------------------------------------------

_EX5_MUTANT_STRATEGIES = [
    (Fraction(1), Fraction(0), Fraction(0)),
    (Fraction(0), Fraction(0), Fraction(1)),
    (Fraction(1, 2), Fraction(0), Fraction(1, 2)),
    (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)),
]


@corpus_check("ex5_p0", "nearby incumbents mix (1 - eps(1 + q1 - q2)) / (2(1 - eps))")
def _ex5_nearby(context: CorpusContext) -> Tuple[bool, str]:
    config = context.scenario.config
    game = config.game
    mutant_types = tuple(PreferenceType.indifferent(game, j, 0) for j in range(2))
    for eps in (Fraction(1, 10), Fraction(1, 4)):
        mutants = MutantSubProfile((0, 1), mutant_types, (eps, eps))
        for q in _EX5_MUTANT_STRATEGIES:
            result = nearby_equilibrium(config, mutants, {0: MixedStrategy(q), 1: MixedStrategy(q)})
            if not result.found:
                return False, f"eps={eps}, q={q}: {result.reason}"
            expected = (1 - eps * (1 + q[0] - q[1])) / (2 * (1 - eps))
            actual = [result.assignment.incumbents[i][0][0] for i in range(2)]
            if any(a != expected for a in actual):
                return False, f"eps={eps}, q={q}: {actual} != {expected}"
    return True, "eps in {1/10, 1/4}"


@corpus_check("ex5_p0", "third actions inferior below eps 1/5")
def _ex5_inferiority(context: CorpusContext) -> Tuple[bool, str]:
    game = context.scenario.game
    for eps in (Fraction(1, 10), Fraction(1, 6), Fraction(1, 5)):
        for q in _EX5_MUTANT_STRATEGIES:
            p1 = (1 - eps * (1 + q[0] - q[1])) / (2 * (1 - eps))
            incumbent = (p1, 1 - p1, Fraction(0))
            mix = tuple((1 - eps) * a + eps * b for a, b in zip(incumbent, q))
            values = []
            for action in range(3):
                own = tuple(Fraction(int(k == action)) for k in range(3))
                values.append(expected_value(game.payoff_table(0), [own, mix]))
            leak = eps * q[2]
            if values[0] != values[1] or values[0] != 3 - 3 * leak or values[2] != (5 - leak) / 2:
                return False, f"eps={eps}, q={q}: {values}"
            if (values[0] > values[2]) != (leak < Fraction(1, 5)):
                return False, f"eps={eps}, q={q}: inferiority fails"
    return True, "eps in {1/10, 1/6, 1/5}"


@corpus_check("ex5_p0", "far equilibrium favours the mutants for every share")
def _ex5_far(context: CorpusContext) -> Tuple[bool, str]:
    scenario = context.scenario
    check = verify_unobservable_assignment(scenario.config, scenario.mutants, scenario.assignment)
    differences = fitness_diff_polynomials(scenario.config, scenario.mutants, scenario.assignment)
    favoured = all(holds_on_box(d.polynomial) and not d.polynomial.is_zero() for d in differences)
    passed = check.equilibrium and check.distance == Fraction(1, 2) and favoured
    return passed, f"distance {check.distance}, differences {[str(d.polynomial) for d in differences]}"


@corpus_check("ex5_p0", "every pure entry keeps a nearby equilibrium")
def _ex5_survey(context: CorpusContext) -> Tuple[bool, str]:
    details = context.verdict().details
    return details.get("nearby_found") == 9, f"{details.get('nearby_found')} of 9 at eps {details.get('nearby_share')}"


@corpus_check("nongeneric_materialist", "no nearby equilibrium after entry on a23")
def _nongeneric_nearby(context: CorpusContext) -> Tuple[bool, str]:
    scenario = context.scenario
    result = nearby_equilibrium(scenario.config, scenario.mutants, scenario.assignment.unobserved)
    return not result.found, result.reason


# ---------------------------------------------------------------------------
# Prisoner's Dilemma
# ---------------------------------------------------------------------------

@corpus_check("ex6_pd", "stable without observability")
def _ex6_unobserved(context: CorpusContext) -> Tuple[bool, str]:
    verdict = check_stability(context.at("0").config, context.options)
    return verdict.verdict.value == "stable" and verdict.route.value == "materialist-nash", verdict.route.value


@corpus_check("ex6_pd", "mutant advantage eps p at every p")
def _ex6_advantage(context: CorpusContext) -> Tuple[bool, str]:
    for p in ("1/100", "1/2", "99/100"):
        verdict = check_stability(context.at(p).config, context.options)
        if verdict.certificate is None:
            return False, f"p={p}: {verdict.verdict.value} without certificate"
        degree = sympy.Rational(p)
        for j in range(2):
            expected = eps_symbol(1 - j) * degree
            if sympy.expand(verdict.certificate.difference(j).expr - expected) != 0:
                return False, f"p={p}: {verdict.certificate.difference(j)}"
    return True, "p in {1/100, 1/2, 99/100}"


@corpus_check("ex6_pd", "high observability threshold is 0")
def _ex6_threshold(context: CorpusContext) -> Tuple[bool, str]:
    game = context.scenario.game
    thresholds = observability_thresholds(game, game.parse_profile("D1,D2"), game.pure("C1,C2"))
    return thresholds.high == 0, str(thresholds.high)


@corpus_check("ex6_pd", "handshake mutants grow for 100 steps")
def _ex6_dynamics(context: CorpusContext) -> Tuple[bool, str]:
    scenario = context.scenario
    points = simulate(scenario.config, scenario.mutants, scenario.assignment, 100)
    for before, after in zip(points, points[1:]):
        if not all(after.shares[i][1] > before.shares[i][1] for i in range(2)):
            return False, f"step {after.step}: {after.shares}"
    return True, f"final mutant shares {[str(points[-1].shares[i][1])[:12] for i in range(2)]}"


@corpus_check("ex6_pd", "mimicking mutants stay at constant share")
def _ex6_fixed_point(context: CorpusContext) -> Tuple[bool, str]:
    scenario = context.scenario
    assignment = mimic_assignment(scenario.config, (0, 1))
    points = simulate(scenario.config, scenario.mutants, assignment, 100, exact=True)
    constant = all(point.shares == points[0].shares for point in points)
    return constant, str(points[-1].shares)
