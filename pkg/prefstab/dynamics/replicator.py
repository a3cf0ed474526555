"""Discrete-time replicator dynamics over type shares with frozen strategies.

Each step rescales every type's share by its payoff-shifted average fitness.
Strategies are those of the post-entry configuration and do not re-equilibrate.
"""

import csv
import itertools
import logging
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

from tqdm import tqdm

from ..config import settings
from ..populations.configuration import (
    Configuration,
    ConfigurationError,
    MutantAssignment,
    MutantSubProfile,
    TypeProfile,
    as_fraction,
)

logger = logging.getLogger(__name__)


class DynamicsError(Exception):
    """Exception raised for errors in replicator simulation."""
    pass


@dataclass(frozen=True)
class TrajectoryPoint:
    step: int
    shares: Tuple[Tuple[Any, ...], ...]
    fitness: Tuple[Tuple[Any, ...], ...]


class ReplicatorSimulator:
    """Payoff-shifted proportional update on a fixed post-entry configuration."""

    def __init__(self, config: Configuration, shift: Optional[Fraction] = None, exact: bool = False,
                 precision: Optional[int] = None):
        """
        Args:
            config: Post-entry (or any) configuration with numeric shares
            shift: Added to fitness before weighting; 1 + |min payoff| by default
            exact: Use Fractions instead of fixed-precision decimals
            precision: Significant digits in decimal mode
        """
        if config.mu.is_symbolic():
            raise DynamicsError("Simulation needs numeric shares")
        self.config = config
        self.exact = exact
        self.precision = precision or settings.DYNAMICS_PRECISION
        game = config.game
        if shift is None:
            shift = 1 + abs(min(game.min_payoff(i) for i in range(game.n)))
        self.shift = self._number(shift)
        self.payoffs: Dict[TypeProfile, Tuple[Any, ...]] = {
            theta: tuple(self._number(as_fraction(v)) for v in config.match_payoff(theta))
            for theta in config.mu.joint_support()
        }

    def _number(self, value: Fraction) -> Any:
        value = Fraction(value)
        if self.exact:
            return value
        with localcontext() as context:
            context.prec = self.precision
            return Decimal(value.numerator) / Decimal(value.denominator)

    def initial_shares(self) -> List[List[Any]]:
        mu = self.config.mu
        return [[self._number(as_fraction(mu.share(i, k))) for k in range(len(mu.types(i)))] for i in range(mu.n)]

    def fitness(self, shares: Sequence[Sequence[Any]]) -> List[List[Any]]:
        """Average fitness of every type against the current shares."""
        sizes = [len(s) for s in shares]
        totals = [[0] * k for k in sizes]
        for theta in itertools.product(*(range(k) for k in sizes)):
            values = self.payoffs[theta]
            for i, k in enumerate(theta):
                weight = 1
                for j, other in enumerate(theta):
                    if j != i:
                        weight = weight * shares[j][other]
                totals[i][k] = totals[i][k] + weight * values[i]
        return totals

    def step(self, shares: Sequence[Sequence[Any]], fitness: Sequence[Sequence[Any]]) -> List[List[Any]]:
        updated = []
        for population, values in zip(shares, fitness):
            if len(set(values)) == 1:
                updated.append(list(population))
                continue
            weights = [s * max(0, f + self.shift) for s, f in zip(population, values)]
            total = sum(weights)
            if total == 0:
                raise DynamicsError("All shifted fitness values vanished; increase the shift")
            new = [w / total for w in weights[:-1]]
            new.append(1 - sum(new))
            updated.append(new)
        return updated

    def run(self, steps: int) -> List[TrajectoryPoint]:
        if steps <= 0:
            raise DynamicsError(f"Number of steps must be positive, got {steps}")
        points = []
        with localcontext() as context:
            context.prec = self.precision
            shares = self.initial_shares()
            for t in tqdm(range(steps + 1), desc="replicator", disable=not settings.SHOW_PROGRESS):
                fitness = self.fitness(shares)
                points.append(TrajectoryPoint(t, tuple(map(tuple, shares)), tuple(map(tuple, fitness))))
                if t < steps:
                    shares = self.step(shares, fitness)
        logger.debug(f"Simulated {steps} steps ({'exact' if self.exact else f'{self.precision} digits'})")
        return points


def simulate(config: Configuration, mutants: MutantSubProfile, assignment: MutantAssignment, steps: int,
             shift: Optional[Fraction] = None, exact: bool = False) -> List[TrajectoryPoint]:
    """Replicator trajectory of the post-entry configuration.

    Args:
        config: Pre-entry configuration
        mutants: Entering mutants with numeric shares
        assignment: Post-entry strategies wherever a mutant is involved
        steps: Number of updates
        shift: Fitness shift (1 + |min payoff| by default)
        exact: Exact rational shares instead of fixed-precision decimals

    Returns:
        steps + 1 points, starting from the post-entry shares
    """
    try:
        post = config.extend(mutants, assignment)
    except ConfigurationError as e:
        raise DynamicsError(f"Invalid post-entry configuration: {str(e)}")
    return ReplicatorSimulator(post, shift, exact).run(steps)


def write_trajectory_csv(points: Sequence[TrajectoryPoint], stream: TextIO) -> None:
    """CSV rows (step, population, type-id, share, fitness), populations numbered from 1."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["step", "population", "type-id", "share", "fitness"])
    for point in points:
        for i, (shares, fitness) in enumerate(zip(point.shares, point.fitness)):
            for k, (share, value) in enumerate(zip(shares, fitness)):
                writer.writerow([point.step, i + 1, k, str(share), str(value)])
