"""
Finite normal-form games with exact rational payoffs.

This package contains:
- Games, mixed and correlated strategies, expected payoffs
- An exact rational simplex for small linear programs
- Nash, strict, aggregate strong and strictly strong equilibrium checks
- Pareto dominance over the product-strategy payoff region

Usage:
    from prefstab.games import game_from_dict, classify_nash

    game = game_from_dict({
        "actions": [["C1", "D1"], ["C2", "D2"]],
        "payoffs": {"C1,C2": [2, 2], "C1,D2": [0, 3], "D1,C2": [3, 0], "D1,D2": [1, 1]},
    })
    classification = classify_nash(game, game.pure("D1,D2"))
"""

from .game_core import (
    Game, GameError, MixedStrategy, MixedProfile, CorrelatedStrategy,
    expected_payoff, expected_value, coalition_payoff_sum, game_from_dict,
    game_to_dict, parse_rational, product_grid
)
from .exact_lp import LPError, LPStatus, LPResult, maximize, solve_linear_system
from .equilibrium import (
    EquilibriumError, SolverLimitError, TriState, NashSolution, NashClassification,
    is_nash, is_strict_nash, enumerate_pure_nash, solve_mixed_nash, classify_nash,
    is_aggregate_strong_nash, is_strictly_strong_nash, deviants_all_worse
)
from .efficiency import (
    EfficiencyError, DominanceRelation, EfficiencyStatus, EfficiencyReport,
    dominance_relation, find_dominator, efficiency_status
)

__all__ = [
    # Game core module
    'Game', 'GameError', 'MixedStrategy', 'MixedProfile', 'CorrelatedStrategy',
    'expected_payoff', 'expected_value', 'coalition_payoff_sum', 'game_from_dict',
    'game_to_dict', 'parse_rational', 'product_grid',

    # Exact LP module
    'LPError', 'LPStatus', 'LPResult', 'maximize', 'solve_linear_system',

    # Equilibrium module
    'EquilibriumError', 'SolverLimitError', 'TriState', 'NashSolution', 'NashClassification',
    'is_nash', 'is_strict_nash', 'enumerate_pure_nash', 'solve_mixed_nash', 'classify_nash',
    'is_aggregate_strong_nash', 'is_strictly_strong_nash', 'deviants_all_worse',

    # Efficiency module
    'EfficiencyError', 'DominanceRelation', 'EfficiencyStatus', 'EfficiencyReport',
    'dominance_relation', 'find_dominator', 'efficiency_status',
]
