"""
Preference distributions and the configurations built on them.

Usage:
    from prefstab.populations import load_scenario, validate_configuration, is_balanced

    scenario = load_scenario("prefstab/data/scenarios/ex1_battle_of_sexes.json")
    report = validate_configuration(scenario.config)
    print(report.ok, is_balanced(scenario.config))
"""

from .configuration import (
    ConfigurationError, ShareSumError, TypeTag, RegimeKind, PreferenceType,
    PreferenceDistribution, MutantSubProfile, MutantAssignment, Regime, Configuration,
    Violation, ValidationReport, post_entry, observation_weights, average_fitness,
    aggregate_outcome, is_balanced, equilibrium_slacks, validate_configuration
)
from .scenario import Scenario, ScenarioError, load_scenario, scenario_from_dict

__all__ = [
    # Configuration module
    'ConfigurationError', 'ShareSumError', 'TypeTag', 'RegimeKind', 'PreferenceType',
    'PreferenceDistribution', 'MutantSubProfile', 'MutantAssignment', 'Regime', 'Configuration',
    'Violation', 'ValidationReport', 'post_entry', 'observation_weights', 'average_fitness',
    'aggregate_outcome', 'is_balanced', 'equilibrium_slacks', 'validate_configuration',

    # Scenario module
    'Scenario', 'ScenarioError', 'load_scenario', 'scenario_from_dict',
]
