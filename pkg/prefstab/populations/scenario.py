"""Scenario files: a game, preference distributions, a regime and optional mutants.

Files are JSON or YAML. Rationals are integers or strings such as "3/18";
floats are rejected. Type profiles are written as comma-separated type
indices ("0,1"), pure profiles as comma-separated action labels, and "*"
stands for every incumbent type profile.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, ValidationError

from ..games.game_core import Game, GameError, MixedProfile, MixedStrategy, game_from_dict, parse_rational
from .configuration import (
    Configuration,
    ConfigurationError,
    MutantAssignment,
    MutantSubProfile,
    PreferenceDistribution,
    PreferenceType,
    Regime,
    TypeTag,
    TypeProfile,
)

logger = logging.getLogger(__name__)

Rational = Union[StrictInt, StrictStr]
StrategySpec = Union[StrictStr, List[Rational]]


class ScenarioError(Exception):
    """Exception raised for unreadable or inconsistent scenario files."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GameModel(_Model):
    players: Optional[StrictInt] = None
    actions: List[List[StrictStr]]
    payoffs: Dict[str, List[Rational]]


class TypeModel(_Model):
    """A preference type; ``kind`` selects which of the other fields apply."""
    kind: Literal["materialist", "indifferent", "dominant", "explicit"] = "explicit"
    name: str = ""
    scale: Rational = 1
    shift: Rational = 0
    value: Rational = 0
    action: Optional[StrictStr] = None
    utilities: Dict[str, Rational] = Field(default_factory=dict)
    default: Optional[Rational] = None  # explicit types: utility of unlisted profiles
    tags: List[Literal["materialist", "indifferent"]] = Field(default_factory=list)


class PopulationModel(_Model):
    types: List[TypeModel]
    shares: List[Rational]


class RegimeModel(_Model):
    mode: Literal["p1", "p0", "partial"]
    p: Optional[Rational] = None
    b: Dict[str, List[StrategySpec]] = Field(default_factory=dict)
    s: List[List[StrategySpec]] = Field(default_factory=list)


class AssignmentModel(_Model):
    mimic: bool = False  # start from mutants copying incumbent type 0
    observed: Dict[str, List[StrategySpec]] = Field(default_factory=dict)
    unobserved: Dict[str, StrategySpec] = Field(default_factory=dict)
    incumbents: List[List[StrategySpec]] = Field(default_factory=list)


class MutantsModel(_Model):
    coalition: List[StrictInt]
    types: List[TypeModel]
    shares: List[Rational]
    assignment: AssignmentModel = Field(default_factory=AssignmentModel)


class ScenarioModel(_Model):
    name: str = ""
    description: str = ""
    game: GameModel
    populations: List[PopulationModel]
    regime: RegimeModel
    mutants: Optional[MutantsModel] = None
    expect: Dict[str, StrictStr] = Field(default_factory=dict)


@dataclass
class Scenario:
    """A loaded scenario with its (unvalidated) configuration."""
    name: str
    game: Game
    config: Configuration
    mutants: Optional[MutantSubProfile] = None
    assignment: Optional[MutantAssignment] = None
    expect: Dict[str, str] = field(default_factory=dict)
    description: str = ""


def parse_text(text: str, suffix: str = ".json") -> Dict[str, Any]:
    """Parse JSON or YAML text, reporting syntax errors with line and column."""
    if suffix.lower() in (".yaml", ".yml"):
        try:
            data = yaml.safe_load(text)
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark
            raise ScenarioError(f"YAML syntax error: {e.problem}", mark.line + 1, mark.column + 1)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"JSON syntax error: {e.msg}", e.lineno, e.colno)
    if not isinstance(data, dict):
        raise ScenarioError("Scenario must be a mapping at the top level")
    return data


def parse_type_profile(key: str, n: int) -> TypeProfile:
    try:
        theta = tuple(int(k) for k in key.split(","))
    except ValueError:
        raise ScenarioError(f"Type profile {key!r} must be comma-separated type indices")
    if len(theta) != n:
        raise ScenarioError(f"Type profile {key!r} needs {n} entries")
    return theta


def build_strategy(game: Game, player: int, spec: StrategySpec) -> MixedStrategy:
    if isinstance(spec, str):
        return MixedStrategy.pure(game.sizes[player], game.action_index(player, spec))
    return game.strategy(player, [parse_rational(w) for w in spec])


def build_profile(game: Game, specs: List[StrategySpec]) -> MixedProfile:
    if len(specs) != game.n:
        raise ScenarioError(f"Profile {specs} needs {game.n} strategies")
    return MixedProfile(tuple(build_strategy(game, i, s) for i, s in enumerate(specs)))


def build_type(game: Game, role: int, model: TypeModel) -> PreferenceType:
    name = model.name
    if model.kind == "materialist":
        return PreferenceType.materialist(game, role, model.scale, model.shift, name)
    if model.kind == "indifferent":
        return PreferenceType.indifferent(game, role, model.value, name)
    if model.kind == "dominant":
        if model.action is None:
            raise ScenarioError(f"Dominant type {name!r} needs an action")
        return PreferenceType.dominant(game, role, game.action_index(role, model.action), name)
    utilities = {}
    if model.default is not None:
        utilities = {p: parse_rational(model.default) for p in game.profiles()}
    for key, value in model.utilities.items():
        utilities[game.parse_profile(key)] = parse_rational(value)
    tags = [TypeTag(t) for t in model.tags]
    return PreferenceType.from_table(game, role, utilities, tags, name)


def _regime(game: Game, mu: PreferenceDistribution, model: RegimeModel, p: Optional[Any]) -> Regime:
    """Build the regime; ``p`` overrides the file's mode ("1", "0" or a rational)."""
    mode, degree = model.mode, model.p
    if p is not None:
        value = parse_rational(p)
        mode, degree = ("p1", None) if value == 1 else ("p0", None) if value == 0 else ("partial", value)

    b = None
    if mode in ("p1", "partial"):
        if not model.b:
            raise ScenarioError(f"Regime {mode} needs observed strategies 'b'")
        b = {}
        default = model.b.get("*")
        for theta in mu.joint_support():
            key = ",".join(map(str, theta))
            specs = model.b.get(key, default)
            if specs is None:
                raise ScenarioError(f"'b' is undefined on type profile {key}")
            b[theta] = build_profile(game, specs)
    s = None
    if mode in ("p0", "partial"):
        if len(model.s) != game.n:
            raise ScenarioError(f"Regime {mode} needs unobserved strategies 's' for every population")
        s = [[build_strategy(game, i, spec) for spec in row] for i, row in enumerate(model.s)]

    if mode == "p1":
        return Regime.observable(b)
    if mode == "p0":
        return Regime.unobservable(s)
    if degree is None:
        raise ScenarioError("Partial observability needs 'p'")
    return Regime.partial(parse_rational(degree), b, s)


def _mutants(config: Configuration, model: MutantsModel) -> Tuple[MutantSubProfile, MutantAssignment]:
    game = config.game
    coalition = tuple(model.coalition)
    types = tuple(build_type(game, j, t) for j, t in zip(coalition, model.types))
    mutants = MutantSubProfile(coalition, types, tuple(parse_rational(e) for e in model.shares))

    spec = model.assignment
    observed: Dict[TypeProfile, MixedProfile] = {}
    unobserved: Dict[int, MixedStrategy] = {}
    if spec.mimic:
        from ..analysis.certificates import mimic_assignment
        base = mimic_assignment(config, coalition)
        observed.update(base.observed)
        unobserved.update(base.unobserved)
    for key, specs in spec.observed.items():
        observed[parse_type_profile(key, game.n)] = build_profile(game, specs)
    for key, strategy in spec.unobserved.items():
        unobserved[int(key)] = build_strategy(game, int(key), strategy)
    incumbents = None
    if spec.incumbents:
        incumbents = tuple(tuple(build_strategy(game, i, x) for x in row) for i, row in enumerate(spec.incumbents))
    return mutants, MutantAssignment(observed, unobserved, incumbents)


def scenario_from_dict(data: Dict[str, Any], p: Optional[Any] = None) -> Scenario:
    """Build a scenario from parsed data.

    Args:
        data: Parsed file content
        p: Optional degree of observability overriding the file's regime

    Raises:
        ScenarioError: on schema or consistency problems
        ConfigurationError: on share-sum and structural problems (ShareSumError included)
    """
    try:
        model = ScenarioModel.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(x) for x in first["loc"])
        raise ScenarioError(f"Schema error at {location}: {first['msg']}")
    try:
        game = game_from_dict(model.game.model_dump(exclude_none=True))
        if len(model.populations) != game.n:
            raise ScenarioError(f"{len(model.populations)} populations for a {game.n}-player game")
        mu = PreferenceDistribution([
            ([build_type(game, i, t) for t in population.types], population.shares)
            for i, population in enumerate(model.populations)
        ])
        config = Configuration(game, mu, _regime(game, mu, model.regime, p), validate=False)
        mutants, assignment = _mutants(config, model.mutants) if model.mutants is not None else (None, None)
    except (ScenarioError, ConfigurationError):
        raise
    except GameError as e:
        raise ScenarioError(str(e))
    logger.debug(f"Loaded scenario {model.name!r} ({config.kind.value})")
    return Scenario(model.name, game, config, mutants, assignment, dict(model.expect), model.description)


def load_scenario(path: Union[str, Path], p: Optional[Any] = None) -> Scenario:
    """Read a JSON or YAML scenario file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"Cannot read {path}: {str(e)}")
    scenario = scenario_from_dict(parse_text(text, path.suffix), p)
    if not scenario.name:
        scenario.name = path.stem
    return scenario
