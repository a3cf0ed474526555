"""
Stability analysis of configurations.

This package contains:
- Exact share polynomials and invader certificates
- Constructive and searched invaders per observability regime
- Uniform invasion barriers and observability thresholds
- Nearby post-entry equilibria for unobserved types
- The stability checker combining all routes

Usage:
    from prefstab.analysis import AnalysisOptions, check_stability

    verdict = check_stability(config, AnalysisOptions(grid_resolution=10))
    if verdict.certificate is not None:
        print(verdict.certificate.difference(0))
"""

from .polynomials import EpsPolynomial, PolynomialError, eps_symbol, holds_on_box
from .certificates import (
    CertificateError, ComparisonMode, InvaderCertificate, certify, fitness_diff_polynomials,
    mimic_assignment, slack_polynomials, verify_certificate
)
from .options import AnalysisOptions
from .invaders import InvaderSearchError, find_invader, search_coalition
from .nearby import (
    NearbyEquilibriumError, NearbyResult, AssignmentCheck, nearby_equilibrium,
    verify_unobservable_assignment
)
from .thresholds import ObservabilityThresholds, ThresholdError, observability_thresholds
from .barriers import BarrierError, PairwiseRoute, deviation_barrier, pairwise_bounds, pairwise_route
from .stability import (
    StabilityError, StabilityVerdict, Verdict, Route, UnknownReason, check_stability,
    search_order, uniform_invasion_barrier
)

__all__ = [
    # Polynomials module
    'EpsPolynomial', 'PolynomialError', 'eps_symbol', 'holds_on_box',

    # Certificates module
    'CertificateError', 'ComparisonMode', 'InvaderCertificate', 'certify', 'fitness_diff_polynomials',
    'mimic_assignment', 'slack_polynomials', 'verify_certificate',

    # Options module
    'AnalysisOptions',

    # Invaders module
    'InvaderSearchError', 'find_invader', 'search_coalition',

    # Nearby module
    'NearbyEquilibriumError', 'NearbyResult', 'AssignmentCheck', 'nearby_equilibrium',
    'verify_unobservable_assignment',

    # Thresholds module
    'ObservabilityThresholds', 'ThresholdError', 'observability_thresholds',

    # Barriers module
    'BarrierError', 'PairwiseRoute', 'deviation_barrier', 'pairwise_bounds', 'pairwise_route',

    # Stability module
    'StabilityError', 'StabilityVerdict', 'Verdict', 'Route', 'UnknownReason', 'check_stability',
    'search_order', 'uniform_invasion_barrier',
]
