"""Preference types, distributions and configurations under each observability regime.

A configuration pairs a preference distribution with equilibrium strategies:
``b`` (types observed, one profile per matched type profile), ``s`` (types
unobserved, one strategy per type) or both at a degree of observability
``p``. Shares and ``p`` may be sympy expressions, which is how post-entry
fitness differences are expanded symbolically; validation needs numbers.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy

from ..games.game_core import (
    CorrelatedStrategy,
    Game,
    MixedProfile,
    MixedStrategy,
    Profile,
    expected_value,
    parse_rational,
)

logger = logging.getLogger(__name__)

TypeProfile = Tuple[int, ...]


class ConfigurationError(Exception):
    """Exception raised for invalid preference distributions or configurations."""

    def __init__(self, message: str, report: Optional["ValidationReport"] = None):
        super().__init__(message)
        self.report = report


class ShareSumError(ConfigurationError):
    """Raised when the shares of a population do not sum to one."""
    pass


class TypeTag(Enum):
    """Checked markers on preference types."""
    MATERIALIST = "materialist"  # positive affine transform of own fitness
    INDIFFERENT = "indifferent"  # constant utility


class RegimeKind(Enum):
    """Degree of observability of preference types."""
    P1 = "p1"            # types observed
    P0 = "p0"            # types unobserved
    PARTIAL = "partial"  # observed with probability p


def is_numeric(value: Any) -> bool:
    return isinstance(value, (int, Fraction)) or (isinstance(value, sympy.Basic) and value.is_Rational)


def as_fraction(value: Any) -> Fraction:
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, sympy.Basic) and value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    raise ConfigurationError(f"Value {value!r} is not an exact number")


@dataclass(frozen=True)
class PreferenceType:
    """A utility tensor over pure profiles for the player in ``role``."""
    role: int
    sizes: Tuple[int, ...]
    values: Tuple[Fraction, ...]
    tags: FrozenSet[TypeTag] = field(default=frozenset(), compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        values = tuple(parse_rational(v) for v in self.values)
        if len(values) != int(np.prod(self.sizes)):
            raise ConfigurationError(f"Type {self.name or ''} has {len(values)} utilities for {int(np.prod(self.sizes))} profiles")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "tags", frozenset(self.tags))

    @cached_property
    def table(self) -> np.ndarray:
        table = np.array(self.values, dtype=object).reshape(self.sizes)
        table.setflags(write=False)
        return table

    @classmethod
    def from_table(cls, game: Game, role: int, utilities: Mapping[Profile, Any],
                   tags: Sequence[TypeTag] = (), name: str = "") -> "PreferenceType":
        missing = [game.label(p) for p in game.profiles() if p not in utilities]
        if missing:
            raise ConfigurationError(f"Utilities of type {name!r} undefined on {missing[:3]}")
        return cls(role, game.sizes, tuple(utilities[p] for p in game.profiles()), frozenset(tags), name)

    @classmethod
    def materialist(cls, game: Game, role: int, scale: Any = 1, shift: Any = 0, name: str = "") -> "PreferenceType":
        scale, shift = parse_rational(scale), parse_rational(shift)
        if scale <= 0:
            raise ConfigurationError("Materialist scale must be positive")
        values = {p: scale * game.payoff(p)[role] + shift for p in game.profiles()}
        return cls.from_table(game, role, values, (TypeTag.MATERIALIST,), name or f"materialist{role + 1}")

    @classmethod
    def indifferent(cls, game: Game, role: int, value: Any = 0, name: str = "") -> "PreferenceType":
        value = parse_rational(value)
        return cls.from_table(game, role, {p: value for p in game.profiles()}, (TypeTag.INDIFFERENT,),
                              name or f"indifferent{role + 1}")

    @classmethod
    def dominant(cls, game: Game, role: int, action: int, name: str = "") -> "PreferenceType":
        """Utility 1 whenever the role plays ``action``, 0 otherwise."""
        values = {p: Fraction(int(p[role] == action)) for p in game.profiles()}
        return cls.from_table(game, role, values, (), name or f"dominant-{game.action_sets[role][action]}")

    def utility(self, profile: Profile) -> Fraction:
        return self.table[tuple(profile)]

    def is_indifferent(self) -> bool:
        return len(set(self.values)) == 1

    def is_materialist(self, game: Game) -> bool:
        fitness = [game.payoff(p)[self.role] for p in game.profiles()]
        anchor = next((k for k in range(1, len(fitness)) if fitness[k] != fitness[0]), None)
        if anchor is None:
            return self.is_indifferent()
        scale = (self.values[anchor] - self.values[0]) / (fitness[anchor] - fitness[0])
        shift = self.values[0] - scale * fitness[0]
        return scale > 0 and all(u == scale * f + shift for u, f in zip(self.values, fitness))

    def check_tags(self, game: Game) -> None:
        if TypeTag.MATERIALIST in self.tags and not self.is_materialist(game):
            raise ConfigurationError(f"Type {self.name!r} is tagged materialist but is not an affine copy of fitness")
        if TypeTag.INDIFFERENT in self.tags and not self.is_indifferent():
            raise ConfigurationError(f"Type {self.name!r} is tagged indifferent but is not constant")

    def strictly_dominant_action(self) -> Optional[int]:
        """The action strictly better than every other against every opponent profile, if any."""
        table = self.table
        for action in range(self.sizes[self.role]):
            if all(
                table[p[:self.role] + (action,) + p[self.role + 1:]] > table[p]
                for p in itertools.product(*(range(k) for k in self.sizes))
                if p[self.role] != action
            ):
                return action
        return None

    def label(self) -> str:
        return self.name or f"type{self.role + 1}"


@dataclass(frozen=True)
class Population:
    """The types of one population with their shares."""
    types: Tuple[PreferenceType, ...]
    shares: Tuple[Any, ...]


class PreferenceDistribution:
    """Independent finite-support type distributions, one per population."""

    def __init__(self, populations: Sequence[Tuple[Sequence[PreferenceType], Sequence[Any]]]):
        built = []
        for i, (types, shares) in enumerate(populations):
            types = tuple(types)
            shares = tuple(parse_rational(s) if isinstance(s, (str, int, Fraction)) else s for s in shares)
            if not types or len(types) != len(shares):
                raise ConfigurationError(f"Population {i + 1} needs one share per type")
            if any(t.role != i for t in types):
                raise ConfigurationError(f"Population {i + 1} contains a type for another role")
            if len(set(types)) != len(types):
                raise ConfigurationError(f"Population {i + 1} lists the same utility tensor twice")
            if all(is_numeric(s) for s in shares):
                if any(s <= 0 for s in shares):
                    raise ConfigurationError(f"Population {i + 1} has a non-positive share")
                if sum(shares) != 1:
                    raise ShareSumError(f"share-sum violation: population {i + 1} shares sum to {sum(shares)}")
            elif sympy.expand(sum(shares) - 1) != 0:
                raise ShareSumError(f"share-sum violation: population {i + 1} shares do not sum to 1")
            built.append(Population(types, shares))
        self.populations: Tuple[Population, ...] = tuple(built)

    @property
    def n(self) -> int:
        return len(self.populations)

    def types(self, i: int) -> Tuple[PreferenceType, ...]:
        return self.populations[i].types

    def share(self, i: int, k: int) -> Any:
        return self.populations[i].shares[k]

    def support_sizes(self) -> Tuple[int, ...]:
        return tuple(len(p.types) for p in self.populations)

    def joint_support(self) -> Iterator[TypeProfile]:
        return itertools.product(*(range(k) for k in self.support_sizes()))

    def weight(self, theta: TypeProfile, exclude: Optional[int] = None) -> Any:
        weight = 1
        for i, k in enumerate(theta):
            if i != exclude:
                weight = weight * self.share(i, k)
        return weight

    def is_monomorphic(self) -> bool:
        return all(len(p.types) == 1 for p in self.populations)

    def is_symbolic(self) -> bool:
        return not all(is_numeric(s) for p in self.populations for s in p.shares)


@dataclass(frozen=True)
class MutantSubProfile:
    """Mutant types entering the populations of ``coalition`` with shares ``shares``."""
    coalition: Tuple[int, ...]
    mutant_types: Tuple[PreferenceType, ...]
    shares: Tuple[Any, ...]

    def __post_init__(self):
        if not self.coalition:
            raise ConfigurationError("A mutant sub-profile needs a nonempty coalition")
        if len(self.coalition) != len(self.mutant_types) or len(self.coalition) != len(self.shares):
            raise ConfigurationError("One mutant type and one share per coalition member")
        if list(self.coalition) != sorted(set(self.coalition)):
            raise ConfigurationError(f"Coalition {self.coalition} must be sorted and duplicate-free")
        for j, mutant, eps in zip(self.coalition, self.mutant_types, self.shares):
            if mutant.role != j:
                raise ConfigurationError(f"Mutant for population {j + 1} has role {mutant.role + 1}")
            if is_numeric(eps) and not 0 < as_fraction(eps) < 1:
                raise ConfigurationError(f"Mutant share {eps} outside (0, 1)")

    @property
    def norm(self) -> Any:
        if all(is_numeric(e) for e in self.shares):
            return max(as_fraction(e) for e in self.shares)
        return sympy.Max(*self.shares)

    def share_of(self, j: int) -> Any:
        return self.shares[self.coalition.index(j)]

    def mutant_of(self, j: int) -> PreferenceType:
        return self.mutant_types[self.coalition.index(j)]


def post_entry(mu: PreferenceDistribution, mutants: MutantSubProfile) -> PreferenceDistribution:
    """Rescale the coalition's populations by (1 - eps_j) and append the mutant with mass eps_j."""
    populations = []
    for i, population in enumerate(mu.populations):
        if i not in mutants.coalition:
            populations.append((population.types, population.shares))
            continue
        mutant, eps = mutants.mutant_of(i), mutants.share_of(i)
        if mutant in population.types:
            raise ConfigurationError(f"Mutant {mutant.label()} coincides with an incumbent of population {i + 1}")
        shares = tuple((1 - eps) * s for s in population.shares) + (eps,)
        populations.append((population.types + (mutant,), shares))
    return PreferenceDistribution(populations)


@dataclass(frozen=True)
class MutantAssignment:
    """Post-entry strategies wherever a mutant is involved.

    ``observed`` maps extended type profiles that contain at least one mutant
    to the profile played when types are seen. ``unobserved`` gives each
    entering mutant's strategy when they are not. ``incumbents`` optionally
    replaces the incumbents' unobserved strategies (nearby adjustments).
    Mutant type indices equal the number of incumbent types of their population.
    """
    observed: Mapping[TypeProfile, MixedProfile] = field(default_factory=dict)
    unobserved: Mapping[int, MixedStrategy] = field(default_factory=dict)
    incumbents: Optional[Tuple[Tuple[MixedStrategy, ...], ...]] = None


def observation_weights(players: Sequence[int], p: Any) -> List[Tuple[FrozenSet[int], Any]]:
    """Weights p^(m-|T|) (1-p)^|T| for every subset T of ``players`` (the ignorant ones)."""
    players = list(players)
    m = len(players)
    weights = []
    for size in range(m + 1):
        for ignorant in itertools.combinations(players, size):
            weights.append((frozenset(ignorant), p ** (m - size) * (1 - p) ** size))
    return weights


@dataclass(frozen=True)
class Regime:
    """Active observability regime and its strategy functions."""
    kind: RegimeKind
    b: Optional[Mapping[TypeProfile, MixedProfile]] = None
    s: Optional[Tuple[Tuple[MixedStrategy, ...], ...]] = None
    p: Any = None

    @classmethod
    def observable(cls, b: Mapping[TypeProfile, MixedProfile]) -> "Regime":
        return cls(RegimeKind.P1, b=dict(b))

    @classmethod
    def unobservable(cls, s: Sequence[Sequence[MixedStrategy]]) -> "Regime":
        return cls(RegimeKind.P0, s=tuple(tuple(x) for x in s))

    @classmethod
    def partial(cls, p: Any, b: Mapping[TypeProfile, MixedProfile], s: Sequence[Sequence[MixedStrategy]]) -> "Regime":
        if is_numeric(p) and not 0 < as_fraction(p) < 1:
            raise ConfigurationError(f"Degree of observability {p} must lie strictly between 0 and 1")
        p = as_fraction(p) if is_numeric(p) else p
        return cls(RegimeKind.PARTIAL, b=dict(b), s=tuple(tuple(x) for x in s), p=p)


@dataclass(frozen=True)
class Violation:
    """First failing best-response condition."""
    observed: bool
    player: int
    action: int
    gain: Fraction
    types: TypeProfile = ()

    def describe(self, game: Game) -> str:
        where = f"match {self.types}" if self.observed else f"type {self.types[0]}"
        return (f"population {self.player + 1}, {where}: deviating to "
                f"{game.action_sets[self.player][self.action]} gains {self.gain}")


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: Optional[Violation] = None


@dataclass(frozen=True)
class Slack:
    """Subjective utility of the assigned strategy minus that of a pure deviation."""
    observed: bool
    player: int
    types: TypeProfile
    action: int
    value: Any


@dataclass(frozen=True)
class AggregateOutcome:
    correlated: CorrelatedStrategy
    product: Optional[MixedProfile] = None

    def pure_profile(self) -> Optional[Profile]:
        if len(self.correlated.weights) == 1:
            return self.correlated.weights[0][0]
        return None


class Configuration:
    """A preference distribution with regime-appropriate equilibrium strategies."""

    def __init__(self, game: Game, mu: PreferenceDistribution, regime: Regime, validate: bool = True):
        """Build and (by default) validate a configuration.

        Args:
            game: The objective game
            mu: Preference distribution
            regime: Observability regime with its strategies
            validate: Check equilibrium conditions eagerly

        Raises:
            ConfigurationError: on structural problems or failed equilibrium conditions
        """
        if mu.n != game.n:
            raise ConfigurationError(f"{mu.n} populations for a {game.n}-player game")
        for i in range(game.n):
            for t in mu.types(i):
                if t.sizes != game.sizes:
                    raise ConfigurationError(f"Type {t.label()} does not match the game dimensions")
                t.check_tags(game)
        self.game = game
        self.mu = mu
        self.regime = regime
        self._match_cache: Dict[TypeProfile, Tuple[Any, ...]] = {}
        self._check_structure()
        if validate:
            report = validate_configuration(self)
            if not report.ok:
                raise ConfigurationError(
                    f"Equilibrium violation: {report.violation.describe(game)}", report
                )

    @property
    def kind(self) -> RegimeKind:
        return self.regime.kind

    def _check_structure(self) -> None:
        if self.kind in (RegimeKind.P1, RegimeKind.PARTIAL):
            if self.regime.b is None:
                raise ConfigurationError("Observed-play strategies b are required in this regime")
            for theta in self.mu.joint_support():
                if theta not in self.regime.b:
                    raise ConfigurationError(f"b is undefined on type profile {theta}")
                self.game.check_profile(self.regime.b[theta])
        if self.kind in (RegimeKind.P0, RegimeKind.PARTIAL):
            if self.regime.s is None or len(self.regime.s) != self.game.n:
                raise ConfigurationError("Unobserved-play strategies s are required for every population")
            for i, strategies in enumerate(self.regime.s):
                if len(strategies) != len(self.mu.types(i)):
                    raise ConfigurationError(f"s needs one strategy per type of population {i + 1}")
                for strategy in strategies:
                    if len(strategy) != self.game.sizes[i]:
                        raise ConfigurationError(f"Strategy {strategy} has the wrong dimension for population {i + 1}")

    def b(self, theta: TypeProfile) -> MixedProfile:
        return self.regime.b[tuple(theta)]

    def s(self, i: int, k: int) -> MixedStrategy:
        return self.regime.s[i][k]

    def ignorant_mix(self, theta: TypeProfile, ignorant: FrozenSet[int]) -> List[Tuple[Fraction, ...]]:
        """Weights played in match ``theta`` when the players in ``ignorant`` do not observe."""
        weights = []
        for i, k in enumerate(theta):
            if i in ignorant:
                weights.append(self.s(i, k).weights)
            else:
                weights.append(self.b(theta)[i].weights)
        return weights

    def match_payoff(self, theta: TypeProfile) -> Tuple[Any, ...]:
        """Expected fitness vector of the matched type profile ``theta``."""
        theta = tuple(theta)
        if theta in self._match_cache:
            return self._match_cache[theta]
        game = self.game
        if self.kind is RegimeKind.P1:
            weights = self.b(theta).weights()
            values = tuple(expected_value(game.payoff_table(i), weights) for i in range(game.n))
        elif self.kind is RegimeKind.P0:
            weights = [self.s(i, k).weights for i, k in enumerate(theta)]
            values = tuple(expected_value(game.payoff_table(i), weights) for i in range(game.n))
        else:
            totals = [0] * game.n
            for ignorant, w in observation_weights(range(game.n), self.regime.p):
                weights = self.ignorant_mix(theta, ignorant)
                for i in range(game.n):
                    totals[i] = totals[i] + w * expected_value(game.payoff_table(i), weights)
            values = tuple(totals)
        self._match_cache[theta] = values
        return values

    def is_incumbent_profile(self, theta: TypeProfile, incumbents: Sequence[int]) -> bool:
        return all(k < m for k, m in zip(theta, incumbents))

    def extend(self, mutants: MutantSubProfile, assignment: MutantAssignment) -> "Configuration":
        """The post-entry configuration: incumbents keep their play on all-incumbent matches.

        Shares may be symbolic; the result is never validated here.

        Raises:
            ConfigurationError: if the assignment leaves a mutant match or mutant strategy undefined
        """
        mu = post_entry(self.mu, mutants)
        incumbents = self.mu.support_sizes()
        b = None
        if self.kind in (RegimeKind.P1, RegimeKind.PARTIAL):
            b = {}
            for theta in mu.joint_support():
                if self.is_incumbent_profile(theta, incumbents):
                    b[theta] = self.b(theta)
                elif theta in assignment.observed:
                    b[theta] = assignment.observed[theta]
                else:
                    raise ConfigurationError(f"Assignment misses the observed match {theta}")
        s = None
        if self.kind in (RegimeKind.P0, RegimeKind.PARTIAL):
            base = assignment.incumbents if assignment.incumbents is not None else self.regime.s
            s = []
            for i in range(self.game.n):
                strategies = tuple(base[i])
                if i in mutants.coalition:
                    if i not in assignment.unobserved:
                        raise ConfigurationError(f"Assignment misses the unobserved strategy of mutant {i + 1}")
                    strategies += (assignment.unobserved[i],)
                s.append(strategies)
        regime = Regime(self.kind, b=b, s=tuple(s) if s is not None else None, p=self.regime.p)
        return Configuration(self.game, mu, regime, validate=False)


def average_fitness(config: Configuration, population: int, type_index: int) -> Any:
    """Expected fitness of type ``type_index`` of ``population`` over opponent draws.

    Args:
        config: Configuration (pre- or post-entry)
        population: Population index i
        type_index: Index of the type within supp mu_i

    Returns:
        Exact Fraction, or a sympy expression when shares or p are symbolic
    """
    if not 0 <= type_index < len(config.mu.types(population)):
        raise ConfigurationError(f"Population {population + 1} has no type {type_index}")
    total = 0
    sizes = list(config.mu.support_sizes())
    sizes[population] = 1
    for rest in itertools.product(*(range(k) for k in sizes)):
        theta = rest[:population] + (type_index,) + rest[population + 1:]
        total = total + config.mu.weight(theta, exclude=population) * config.match_payoff(theta)[population]
    if isinstance(total, sympy.Basic):
        return sympy.expand(total)
    return Fraction(total)


def aggregate_mixed_profile(config: Configuration) -> List[Tuple[Any, ...]]:
    """Share-weighted mixture of unobserved play per population (symbolic shares allowed)."""
    mixtures = []
    for i in range(config.game.n):
        mix = [0] * config.game.sizes[i]
        for k in range(len(config.mu.types(i))):
            share = config.mu.share(i, k)
            for a, w in enumerate(config.s(i, k).weights):
                mix[a] = mix[a] + share * w
        mixtures.append(tuple(mix))
    return mixtures


def aggregate_outcome(config: Configuration) -> AggregateOutcome:
    """Induced distribution over pure profiles (and, unobserved, the mixed profile x)."""
    if config.mu.is_symbolic():
        raise ConfigurationError("Aggregate outcome needs numeric shares")
    game = config.game
    if config.kind is RegimeKind.P0:
        x = MixedProfile(tuple(MixedStrategy(tuple(as_fraction(w) for w in mix)) for mix in aggregate_mixed_profile(config)))
        return AggregateOutcome(CorrelatedStrategy.from_product(x), x)
    totals: Dict[Profile, Fraction] = {}
    for theta in config.mu.joint_support():
        weight = config.mu.weight(theta)
        if config.kind is RegimeKind.P1:
            parts = [(Fraction(1), config.b(theta).weights())]
        else:
            parts = [(w, config.ignorant_mix(theta, T)) for T, w in observation_weights(range(game.n), config.regime.p)]
        for w, weights in parts:
            for profile, q in CorrelatedStrategy.from_product(MixedProfile(tuple(MixedStrategy(ws) for ws in weights))).weights:
                totals[profile] = totals.get(profile, Fraction(0)) + weight * w * q
    return AggregateOutcome(CorrelatedStrategy(tuple(totals.items())))


def is_balanced(config: Configuration) -> bool:
    """True iff all incumbent types of each population earn equal average fitness."""
    for i in range(config.game.n):
        values = {average_fitness(config, i, k) for k in range(len(config.mu.types(i)))}
        if len(values) > 1:
            return False
    return True


def _deviation_gaps(table: np.ndarray, weights: Sequence[Sequence[Any]], player: int, own: Sequence[Any]) -> List[Any]:
    """Own value minus the value of each pure action (symbolic weights allowed)."""
    values = []
    for action in range(table.shape[player]):
        local = list(weights)
        local[player] = [1 if k == action else 0 for k in range(table.shape[player])]
        values.append(expected_value(table, local))
    own_value = sum((w * v for w, v in zip(own, values)), 0)
    return [own_value - v for v in values]


def equilibrium_slacks(config: Configuration) -> Iterator[Slack]:
    """Every best-response slack of the configuration's strategies, in a fixed order."""
    game, mu = config.game, config.mu
    n = game.n
    kind = config.kind
    if kind in (RegimeKind.P1, RegimeKind.PARTIAL):
        for theta in mu.joint_support():
            for i in range(n):
                table = mu.types(i)[theta[i]].table
                own = config.b(theta)[i].weights
                if kind is RegimeKind.P1:
                    gaps = _deviation_gaps(table, config.b(theta).weights(), i, own)
                else:
                    gaps = [0] * game.sizes[i]
                    others = [j for j in range(n) if j != i]
                    for ignorant, w in observation_weights(others, config.regime.p):
                        local = _deviation_gaps(table, config.ignorant_mix(theta, ignorant), i, own)
                        gaps = [g + w * x for g, x in zip(gaps, local)]
                for action, gap in enumerate(gaps):
                    yield Slack(True, i, theta, action, gap)
    if kind is RegimeKind.P0:
        mixtures = aggregate_mixed_profile(config)
        for i in range(n):
            for k, preference in enumerate(mu.types(i)):
                own = config.s(i, k).weights
                for action, gap in enumerate(_deviation_gaps(preference.table, mixtures, i, own)):
                    yield Slack(False, i, (k,), action, gap)
    if kind is RegimeKind.PARTIAL:
        for i in range(n):
            rivals = [j for j in range(n) if j != i]
            for k, preference in enumerate(mu.types(i)):
                own = config.s(i, k).weights
                gaps = [0] * game.sizes[i]
                sizes = list(mu.support_sizes())
                sizes[i] = 1
                for rest in itertools.product(*(range(m) for m in sizes)):
                    theta = rest[:i] + (k,) + rest[i + 1:]
                    weight = mu.weight(theta, exclude=i)
                    for ignorant, w in observation_weights(rivals, config.regime.p):
                        mix = config.ignorant_mix(theta, ignorant)
                        mix[i] = own
                        local = _deviation_gaps(preference.table, mix, i, own)
                        gaps = [g + weight * w * x for g, x in zip(gaps, local)]
                for action, gap in enumerate(gaps):
                    yield Slack(False, i, (k,), action, gap)


def validate_configuration(config: Configuration) -> ValidationReport:
    """Check every best-response condition under the subjective utilities.

    Returns:
        ValidationReport; the first violating (types, player, action) when not ok
    """
    if config.mu.is_symbolic() or (config.kind is RegimeKind.PARTIAL and not is_numeric(config.regime.p)):
        raise ConfigurationError("Validation needs numeric shares and p")
    for slack in equilibrium_slacks(config):
        value = as_fraction(sympy.nsimplify(slack.value)) if isinstance(slack.value, sympy.Basic) else Fraction(slack.value)
        if value < 0:
            logger.info(f"Equilibrium violation in population {slack.player + 1} at {slack.types}")
            return ValidationReport(False, Violation(slack.observed, slack.player, slack.action, -value, slack.types))
    return ValidationReport(True)
