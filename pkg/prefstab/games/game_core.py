"""Exact finite normal-form games and multilinear payoff evaluation.

Payoffs and probabilities are ``fractions.Fraction`` throughout. The payoff
tensor is a dense numpy object array of shape ``sizes + (n,)``; pure
profiles are tuples of action indices and are iterated in lexicographic
order everywhere in the package.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import settings

logger = logging.getLogger(__name__)

Profile = Tuple[int, ...]


class GameError(Exception):
    """Exception raised for structural errors in games and strategies."""
    pass


def parse_rational(value: Any) -> Fraction:
    """Parse an exact rational from an int, a Fraction or a ``"p/q"`` string.

    Floats are rejected: the analysis path never sees binary floating point.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise GameError(f"Refusing inexact value {value!r}; write rationals as 'p/q' strings")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise GameError("Empty rational")
        if any(ch in text for ch in ".eE") and "/" not in text:
            raise GameError(f"Refusing decimal literal {value!r}; write rationals as 'p/q' strings")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise GameError(f"Invalid rational {value!r}: {str(e)}")
    raise GameError(f"Unsupported rational value {value!r}")


def iter_profiles(sizes: Sequence[int]) -> Iterator[Profile]:
    """Iterate all pure profiles in lexicographic order."""
    return itertools.product(*(range(k) for k in sizes))


def parse_profile_labels(action_sets: Sequence[Sequence[str]], text: Union[str, Sequence[str]]) -> Profile:
    """Translate "a11,a21" (or a label list) into an index profile."""
    labels = text.split(",") if isinstance(text, str) else list(text)
    if len(labels) != len(action_sets):
        raise GameError(f"Profile {text!r} does not name one action per player")
    profile = []
    for i, label in enumerate(labels):
        label = str(label).strip()
        if label not in action_sets[i]:
            raise GameError(f"Unknown action {label!r} for player {i + 1}")
        profile.append(list(action_sets[i]).index(label))
    return tuple(profile)


def replace_action(profile: Profile, player: int, action: int) -> Profile:
    return profile[:player] + (action,) + profile[player + 1:]


def grid_weights(size: int, resolution: int) -> Iterator[Tuple[Fraction, ...]]:
    """Weight vectors on the simplex whose entries are multiples of 1/resolution."""
    if resolution < 1:
        raise GameError("grid_resolution must be >= 1")
    for bars in itertools.combinations(range(resolution + size - 1), size - 1):
        parts = []
        previous = -1
        for bar in bars + (resolution + size - 1,):
            parts.append(Fraction(bar - previous - 1, resolution))
            previous = bar
        yield tuple(parts)


@dataclass(frozen=True)
class MixedStrategy:
    """A mixed strategy of one player as a dense weight vector."""
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(parse_rational(w) for w in self.weights)
        if not weights:
            raise GameError("A mixed strategy needs at least one action")
        if any(w < 0 for w in weights):
            raise GameError(f"Negative probability in {weights}")
        if sum(weights) != 1:
            raise GameError(f"Probabilities sum to {sum(weights)}, not 1")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def pure(cls, size: int, action: int) -> "MixedStrategy":
        if not 0 <= action < size:
            raise GameError(f"Action index {action} out of range for {size} actions")
        return cls(tuple(Fraction(int(k == action)) for k in range(size)))

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, action: int) -> Fraction:
        return self.weights[action]

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(k for k, w in enumerate(self.weights) if w != 0)

    def is_pure(self) -> bool:
        return len(self.support) == 1

    def pure_action(self) -> int:
        if not self.is_pure():
            raise GameError(f"Strategy {self} is not pure")
        return self.support[0]

    def distance(self, other: "MixedStrategy") -> Fraction:
        """Max-norm distance between two strategies of the same player."""
        if len(other) != len(self):
            raise GameError("Strategies of different dimension")
        return max(abs(a - b) for a, b in zip(self.weights, other.weights))

    def __str__(self) -> str:
        return "(" + ", ".join(str(w) for w in self.weights) + ")"


@dataclass(frozen=True)
class MixedProfile:
    """One mixed strategy per player."""
    strategies: Tuple[MixedStrategy, ...]

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))

    @classmethod
    def pure(cls, sizes: Sequence[int], profile: Profile) -> "MixedProfile":
        if len(sizes) != len(profile):
            raise GameError(f"Profile {profile} does not match {len(sizes)} players")
        return cls(tuple(MixedStrategy.pure(k, a) for k, a in zip(sizes, profile)))

    def __len__(self) -> int:
        return len(self.strategies)

    def __getitem__(self, player: int) -> MixedStrategy:
        return self.strategies[player]

    def __iter__(self):
        return iter(self.strategies)

    def is_pure(self) -> bool:
        return all(s.is_pure() for s in self.strategies)

    def pure_profile(self) -> Profile:
        return tuple(s.pure_action() for s in self.strategies)

    def replace(self, player: int, strategy: MixedStrategy) -> "MixedProfile":
        items = list(self.strategies)
        items[player] = strategy
        return MixedProfile(tuple(items))

    def weights(self) -> List[Tuple[Fraction, ...]]:
        return [s.weights for s in self.strategies]

    def distance(self, other: "MixedProfile") -> Fraction:
        return max(a.distance(b) for a, b in zip(self.strategies, other.strategies))

    def __str__(self) -> str:
        return "(" + ", ".join(str(s) for s in self.strategies) + ")"


@dataclass(frozen=True)
class CorrelatedStrategy:
    """A probability distribution over pure profiles, stored sparsely and sorted."""
    weights: Tuple[Tuple[Profile, Fraction], ...]

    def __post_init__(self):
        merged: Dict[Profile, Fraction] = {}
        for profile, weight in self.weights:
            weight = parse_rational(weight)
            if weight < 0:
                raise GameError(f"Negative probability {weight} on {profile}")
            merged[tuple(profile)] = merged.get(tuple(profile), Fraction(0)) + weight
        if sum(merged.values()) != 1:
            raise GameError(f"Correlated weights sum to {sum(merged.values())}, not 1")
        items = tuple(sorted((p, w) for p, w in merged.items() if w != 0))
        object.__setattr__(self, "weights", items)

    @classmethod
    def from_product(cls, profile: MixedProfile) -> "CorrelatedStrategy":
        supports = [[(a, s[a]) for a in s.support] for s in profile]
        items = []
        for combo in itertools.product(*supports):
            weight = Fraction(1)
            for _, w in combo:
                weight *= w
            items.append((tuple(a for a, _ in combo), weight))
        return cls(tuple(items))

    @classmethod
    def point(cls, profile: Profile) -> "CorrelatedStrategy":
        return cls(((tuple(profile), Fraction(1)),))

    def as_dict(self) -> Dict[Profile, Fraction]:
        return dict(self.weights)


class Game:
    """A finite n-player normal-form game with exact rational payoffs."""

    def __init__(self, action_sets: Sequence[Sequence[str]], payoffs: Mapping[Profile, Sequence[Any]]):
        """Build a game from action labels and a total payoff map.

        Args:
            action_sets: Ordered action labels per player
            payoffs: Map from pure profile (index tuple) to one payoff per player
        """
        self.action_sets: Tuple[Tuple[str, ...], ...] = tuple(tuple(str(a) for a in labels) for labels in action_sets)
        n = len(self.action_sets)
        if n < 2:
            raise GameError(f"A game needs at least 2 players, got {n}")
        if n > settings.MAX_PLAYERS:
            raise GameError(f"{n} players exceeds the cap of {settings.MAX_PLAYERS} (PREFSTAB_MAX_PLAYERS)")
        for i, labels in enumerate(self.action_sets):
            if not labels:
                raise GameError(f"Player {i + 1} has no actions")
            if len(labels) > settings.MAX_ACTIONS:
                raise GameError(f"Player {i + 1} has {len(labels)} actions, cap is {settings.MAX_ACTIONS} (PREFSTAB_MAX_ACTIONS)")
            if len(set(labels)) != len(labels):
                raise GameError(f"Duplicate action labels for player {i + 1}")
            if any("," in label for label in labels):
                raise GameError(f"Action labels may not contain commas: {labels}")

        table = np.empty(self.sizes + (n,), dtype=object)
        for profile in iter_profiles(self.sizes):
            if profile not in payoffs:
                raise GameError(f"Missing payoffs for profile {self.label(profile)}")
            values = tuple(payoffs[profile])
            if len(values) != n:
                raise GameError(f"Profile {self.label(profile)} has {len(values)} payoffs, expected {n}")
            table[profile] = [parse_rational(v) for v in values]
        extra = set(payoffs) - set(iter_profiles(self.sizes))
        if extra:
            raise GameError(f"Payoffs given for unknown profiles: {sorted(extra)}")
        table.setflags(write=False)
        self.table = table

    @property
    def n(self) -> int:
        return len(self.action_sets)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(labels) for labels in self.action_sets)

    def profiles(self) -> Iterator[Profile]:
        return iter_profiles(self.sizes)

    def payoff(self, profile: Profile) -> Tuple[Fraction, ...]:
        return tuple(self.table[tuple(profile)])

    def payoff_table(self, player: int) -> np.ndarray:
        return self.table[..., player]

    def min_payoff(self, player: int) -> Fraction:
        return min(self.payoff_table(player).flat)

    def max_payoff(self, player: int) -> Fraction:
        return max(self.payoff_table(player).flat)

    def label(self, profile: Profile) -> str:
        return ",".join(self.action_sets[i][a] for i, a in enumerate(profile))

    def action_index(self, player: int, label: str) -> int:
        try:
            return self.action_sets[player].index(label)
        except ValueError:
            raise GameError(f"Unknown action {label!r} for player {player + 1}")

    def parse_profile(self, text: Union[str, Sequence[str]]) -> Profile:
        return parse_profile_labels(self.action_sets, text)

    def pure(self, profile: Union[str, Profile]) -> MixedProfile:
        if isinstance(profile, str):
            profile = self.parse_profile(profile)
        return MixedProfile.pure(self.sizes, profile)

    def strategy(self, player: int, weights: Sequence[Any]) -> MixedStrategy:
        strategy = MixedStrategy(tuple(weights))
        if len(strategy) != self.sizes[player]:
            raise GameError(f"Strategy for player {player + 1} has {len(strategy)} weights, expected {self.sizes[player]}")
        return strategy

    def check_profile(self, profile: MixedProfile) -> None:
        if len(profile) != self.n or any(len(s) != k for s, k in zip(profile, self.sizes)):
            raise GameError(f"Profile {profile} does not match game dimensions {self.sizes}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Game) and self.action_sets == other.action_sets and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.action_sets, tuple(self.table.flat)))

    def __repr__(self) -> str:
        return f"Game(sizes={self.sizes})"


def expected_value(table: np.ndarray, weights: Sequence[Sequence[Any]]) -> Any:
    """Multilinear extension of a scalar table at per-player weight vectors.

    The weights may be Fractions or sympy expressions; zero weights are skipped.
    """
    supports = [[(a, w) for a, w in enumerate(ws) if w != 0] for ws in weights]
    total = 0
    for combo in itertools.product(*supports):
        coefficient = 1
        for _, w in combo:
            coefficient = coefficient * w
        total = total + coefficient * table[tuple(a for a, _ in combo)]
    return total


def expected_payoff(game: Game, strategy: Union[MixedProfile, CorrelatedStrategy]) -> Tuple[Fraction, ...]:
    """Exact expected payoff vector of a product or correlated strategy.

    Args:
        game: The objective game
        strategy: A mixed profile or a correlated strategy over pure profiles

    Returns:
        Tuple (pi_1, ..., pi_n) of Fractions
    """
    if isinstance(strategy, CorrelatedStrategy):
        totals = [Fraction(0)] * game.n
        for profile, weight in strategy.weights:
            if len(profile) != game.n or any(not 0 <= a < k for a, k in zip(profile, game.sizes)):
                raise GameError(f"Profile {profile} does not match game dimensions {game.sizes}")
            for i, value in enumerate(game.payoff(profile)):
                totals[i] += weight * value
        return tuple(totals)
    game.check_profile(strategy)
    weights = strategy.weights()
    return tuple(expected_value(game.payoff_table(i), weights) for i in range(game.n))


def coalition_payoff_sum(game: Game, coalition: Sequence[int], profile: MixedProfile) -> Fraction:
    """Sum of expected payoffs over the members of a coalition."""
    members = sorted(set(coalition))
    if not members:
        raise GameError("Coalition must be nonempty")
    if any(not 0 <= j < game.n for j in members):
        raise GameError(f"Coalition {coalition} names unknown players")
    values = expected_payoff(game, profile)
    return sum((values[j] for j in members), Fraction(0))


def game_from_dict(data: Mapping[str, Any]) -> Game:
    """Build a game from the JSON-compatible file structure."""
    try:
        actions = data["actions"]
        players = int(data.get("players", len(actions)))
        if players != len(actions):
            raise GameError(f"'players' is {players} but {len(actions)} action lists are given")
        action_sets = [[str(a) for a in labels] for labels in actions]
        payoffs = {}
        for key, values in data["payoffs"].items():
            payoffs[parse_profile_labels(action_sets, key)] = [parse_rational(v) for v in values]
        return Game(actions, payoffs)
    except GameError:
        raise
    except Exception as e:
        logger.error(f"Error reading game: {str(e)}")
        raise GameError(f"Failed to read game: {str(e)}")


def game_to_dict(game: Game) -> Dict[str, Any]:
    return {
        "players": game.n,
        "actions": [list(labels) for labels in game.action_sets],
        "payoffs": {game.label(p): [str(v) for v in game.payoff(p)] for p in game.profiles()},
    }


def product_grid(game: Game, resolution: int, limit: Optional[int] = None) -> Iterator[MixedProfile]:
    """Product profiles whose weights are multiples of 1/resolution, lexicographically."""
    per_player = [[MixedStrategy(w) for w in grid_weights(k, resolution)] for k in game.sizes]
    total = int(np.prod([len(options) for options in per_player]))
    limit = settings.MAX_GRID_PROFILES if limit is None else limit
    if total > limit:
        raise GameError(f"Grid of {total} profiles exceeds the cap of {limit} (PREFSTAB_MAX_GRID_PROFILES)")
    logger.debug(f"Enumerating {total} grid profiles at resolution {resolution}")
    for combo in itertools.product(*per_player):
        yield MixedProfile(combo)


def action_values(table: np.ndarray, weights: Sequence[Sequence[Any]], player: int) -> List[Any]:
    """Value of each pure action of ``player`` against the others' weights.

    ``weights[player]`` is ignored. Works for Fraction or sympy weights.
    """
    values = []
    for action in range(table.shape[player]):
        local = list(weights)
        local[player] = [1 if k == action else 0 for k in range(table.shape[player])]
        values.append(expected_value(table, local))
    return values


def best_replies(table: np.ndarray, weights: Sequence[Sequence[Fraction]], player: int) -> Tuple[int, ...]:
    """Pure best replies of ``player`` under the scalar table ``table``."""
    values = action_values(table, weights, player)
    top = max(values)
    return tuple(a for a, v in enumerate(values) if v == top)
