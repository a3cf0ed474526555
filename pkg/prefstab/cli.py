"""Command-line front end.

Usage:
    python -m prefstab validate scenario.json
    python -m prefstab stability scenario.json --p 1/2
    python -m prefstab invade scenario.json --coalition 1,2
    python -m prefstab simulate scenario.json --steps 100 --output trajectory.csv
    python -m prefstab examples --filter ex3

Reports go to stdout, logs to stderr.

Exit codes:
    0  stable, or the configuration is valid and balanced
    1  equilibrium or balance violation
    2  unreadable input or failed analysis
    3  unstable (an invader exists)
    4  unknown (search exhausted or capped)
    5  a corpus check failed
"""

import argparse
import logging
import sys
from enum import IntEnum
from typing import List, Optional, Sequence

from . import __version__
from .analysis.certificates import ComparisonMode
from .analysis.invaders import search_coalition
from .analysis.options import AnalysisOptions
from .analysis.stability import StabilityError, Verdict, check_stability
from .config import settings
from .corpus import CorpusError, run_corpus
from .dynamics.replicator import DynamicsError, simulate, write_trajectory_csv
from .games.equilibrium import SolverLimitError
from .games.game_core import GameError, parse_rational
from .populations.configuration import ConfigurationError, average_fitness, is_balanced, validate_configuration
from .populations.scenario import Scenario, ScenarioError, load_scenario
from .reporting import (
    InvadeModel,
    certificate_model,
    summary_lines,
    to_json,
    validation_model,
    verdict_model,
)

logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    VIOLATION = 1
    INPUT_ERROR = 2
    UNSTABLE = 3
    UNKNOWN = 4
    CORPUS_FAILURE = 5


_VERDICT_CODES = {
    Verdict.STABLE: ExitCode.OK,
    Verdict.UNSTABLE: ExitCode.UNSTABLE,
    Verdict.UNKNOWN: ExitCode.UNKNOWN,
}


def _options(args: argparse.Namespace) -> AnalysisOptions:
    fields = {}
    if getattr(args, "grid", None) is not None:
        fields["grid_resolution"] = args.grid
    if getattr(args, "support_limit", None) is not None:
        fields["support_limit"] = args.support_limit
    if getattr(args, "max_nodes", None) is not None:
        fields["max_nodes"] = args.max_nodes
    if getattr(args, "threads", None) is not None:
        fields["threads"] = args.threads
    if getattr(args, "aggregate", False):
        fields["mode"] = ComparisonMode.AGGREGATE
    return AnalysisOptions(**fields)


def _emit(report, output_format: str) -> None:
    if output_format == "text":
        print("\n".join(summary_lines(report)))
    else:
        print(to_json(report))


def _load(args: argparse.Namespace) -> Scenario:
    return load_scenario(args.scenario, getattr(args, "p", None))


def cmd_validate(args: argparse.Namespace) -> ExitCode:
    scenario = _load(args)
    config = scenario.config
    report = validate_configuration(config)
    balanced = is_balanced(config) if report.ok else None
    fitness = None
    if report.ok:
        fitness = [[average_fitness(config, i, k) for k in range(len(config.mu.types(i)))] for i in range(config.game.n)]
    _emit(validation_model(scenario.name, config, report, balanced, fitness), args.format)
    return ExitCode.OK if report.ok and balanced else ExitCode.VIOLATION


def _checked(scenario: Scenario, output_format: str) -> bool:
    report = validate_configuration(scenario.config)
    if not report.ok:
        _emit(validation_model(scenario.name, scenario.config, report, None), output_format)
    return report.ok


def cmd_stability(args: argparse.Namespace) -> ExitCode:
    scenario = _load(args)
    if not _checked(scenario, args.format):
        return ExitCode.VIOLATION
    options = _options(args)
    verdict = check_stability(scenario.config, options)
    _emit(verdict_model(scenario.name, scenario.config, verdict, options.caps()), args.format)
    return _VERDICT_CODES[verdict.verdict]


def _coalition(text: str) -> List[int]:
    try:
        members = sorted({int(k) - 1 for k in text.split(",")})
    except ValueError:
        raise argparse.ArgumentTypeError(f"Coalition {text!r} must list population numbers such as 1,2")
    if not members or members[0] < 0:
        raise argparse.ArgumentTypeError(f"Coalition {text!r} must list population numbers starting at 1")
    return members


def cmd_invade(args: argparse.Namespace) -> ExitCode:
    scenario = _load(args)
    if not _checked(scenario, args.format):
        return ExitCode.VIOLATION
    options = _options(args)
    coalition = args.coalition or list(range(scenario.game.n))
    reason = None
    try:
        certificate = search_coalition(scenario.config, coalition, options)
        if certificate is None:
            reason = "search-exhausted"
    except SolverLimitError as e:
        logger.warning(str(e))
        certificate, reason = None, "solver-limit"
    report = InvadeModel(
        scenario=scenario.name,
        coalition=[j + 1 for j in coalition],
        found=certificate is not None,
        reason=reason,
        certificate=certificate_model(scenario.game, certificate) if certificate else None,
        caps=options.caps(),
    )
    _emit(report, args.format)
    return ExitCode.UNSTABLE if certificate is not None else ExitCode.UNKNOWN


def cmd_simulate(args: argparse.Namespace) -> ExitCode:
    scenario = _load(args)
    if scenario.mutants is None:
        raise ScenarioError(f"Scenario {scenario.name!r} declares no mutants to simulate")
    shift = parse_rational(args.shift) if args.shift is not None else None
    points = simulate(scenario.config, scenario.mutants, scenario.assignment, args.steps, shift, args.exact)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as stream:
            write_trajectory_csv(points, stream)
        logger.info(f"Wrote {len(points)} points to {args.output}")
    else:
        write_trajectory_csv(points, sys.stdout)
    return ExitCode.OK


def cmd_examples(args: argparse.Namespace) -> ExitCode:
    report = run_corpus(args.filter, _options(args))
    _emit(report, args.format)
    for check in report.checks:
        if not check.passed:
            logger.warning(f"FAILED {check.scenario}: {check.check} ({check.detail})")
    return ExitCode.OK if report.failed == 0 else ExitCode.CORPUS_FAILURE


def _add_analysis_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid", type=int, help="Mixed-strategy grid resolution (default PREFSTAB_GRID)")
    parser.add_argument("--support-limit", type=int, help="Largest support size for Nash enumeration")
    parser.add_argument("--max-nodes", type=int, help="Invader search node cap")
    parser.add_argument("--threads", type=int, help="Worker threads (default PREFSTAB_THREADS)")
    parser.add_argument("--aggregate", action="store_true", help="Compare the coalition's summed fitness")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prefstab", description="Evolutionary stability of preference configurations")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)
    parser.add_argument("--format", choices=["json", "text"], default="json")
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="Check equilibrium conditions and balance")
    validate.add_argument("scenario")
    validate.add_argument("--p", help="Degree of observability overriding the file: 1, 0 or a rational such as 1/2")
    validate.set_defaults(handler=cmd_validate)

    stability = commands.add_parser("stability", help="Decide stability")
    stability.add_argument("scenario")
    stability.add_argument("--p", help="Degree of observability overriding the file: 1, 0 or a rational such as 1/2")
    _add_analysis_flags(stability)
    stability.set_defaults(handler=cmd_stability)

    invade = commands.add_parser("invade", help="Search one coalition for an invader")
    invade.add_argument("scenario")
    invade.add_argument("--p", help="Degree of observability overriding the file")
    invade.add_argument("--coalition", type=_coalition, help="Populations receiving mutants, e.g. 1,2 (default all)")
    _add_analysis_flags(invade)
    invade.set_defaults(handler=cmd_invade)

    sim = commands.add_parser("simulate", help="Replicator trajectory of the scenario's mutants")
    sim.add_argument("scenario")
    sim.add_argument("--p", help="Degree of observability overriding the file")
    sim.add_argument("--steps", type=int, default=100)
    sim.add_argument("--shift", help="Fitness shift as a rational (default 1 + |min payoff|)")
    sim.add_argument("--exact", action="store_true", help="Exact rational shares")
    sim.add_argument("--output", help="CSV file (default stdout)")
    sim.set_defaults(handler=cmd_simulate)

    examples = commands.add_parser("examples", help="Replay the bundled scenario corpus")
    examples.add_argument("--filter", help="Only scenarios whose name contains this text")
    _add_analysis_flags(examples)
    examples.set_defaults(handler=cmd_examples)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, stream=sys.stderr,
                        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    try:
        return int(args.handler(args))
    except (ScenarioError, ConfigurationError, GameError) as e:
        print(f"error: {str(e)}", file=sys.stderr)
        return int(ExitCode.INPUT_ERROR)
    except (StabilityError, DynamicsError, CorpusError) as e:
        logger.error(str(e))
        print(f"error: {str(e)}", file=sys.stderr)
        return int(ExitCode.INPUT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
