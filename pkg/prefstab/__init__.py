"""
prefstab: evolutionary stability of preference configurations.

Subpackages:
- games: finite normal-form games, exact equilibria and Pareto efficiency
- populations: preference types, configurations and scenario files
- analysis: invader certificates, barriers, thresholds and stability verdicts
- dynamics: replicator simulation of post-entry type shares

Usage:
    from prefstab.populations import load_scenario
    from prefstab.analysis import check_stability

    scenario = load_scenario("prefstab/data/scenarios/ex6_pd.json", p="1/2")
    verdict = check_stability(scenario.config)
    print(verdict.verdict, verdict.route)
"""

# Version information
__version__ = '0.1.0'

__all__ = ['__version__']
