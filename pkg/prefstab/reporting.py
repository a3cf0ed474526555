"""JSON reports for validation, stability verdicts and invader certificates."""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .analysis.certificates import InvaderCertificate
from .analysis.stability import StabilityVerdict
from .config import settings
from .games.game_core import Game, MixedProfile, MixedStrategy
from .populations.configuration import Configuration, ValidationReport

logger = logging.getLogger(__name__)


class _Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    schema_version: str = settings.REPORT_SCHEMA_VERSION
    version: str = __version__


class PolynomialEntry(BaseModel):
    population: int
    incumbent: Optional[int] = None
    observed: Optional[bool] = None
    types: Optional[List[int]] = None
    action: Optional[str] = None
    polynomial: str
    coefficients: Dict[str, str]
    diagonal: str


class AssignmentEntry(BaseModel):
    types: List[int]
    profile: List[List[str]]


class CertificateModel(BaseModel):
    route: str
    coalition: List[int]
    mutant_types: List[str]
    mode: str
    observed: List[AssignmentEntry] = Field(default_factory=list)
    unobserved: Dict[str, List[str]] = Field(default_factory=dict)
    differences: List[PolynomialEntry]
    slacks: List[PolynomialEntry]
    validity: str
    bound: str
    bound_exact: bool
    box: Optional[str] = None


class ValidationModel(_Report):
    scenario: str
    regime: str
    ok: bool
    balanced: Optional[bool] = None
    violation: Optional[str] = None
    fitness: List[List[str]] = Field(default_factory=list)


class VerdictModel(_Report):
    scenario: str
    regime: str
    verdict: str
    route: str
    premises: List[str]
    barrier: Optional[str] = None
    reason: Optional[str] = None
    thresholds: Dict[str, Optional[str]] = Field(default_factory=dict)
    details: Dict[str, Any] = Field(default_factory=dict)
    certificate: Optional[CertificateModel] = None
    caps: Dict[str, Any] = Field(default_factory=dict)


class InvadeModel(_Report):
    scenario: str
    coalition: List[int]
    found: bool
    reason: Optional[str] = None
    certificate: Optional[CertificateModel] = None
    caps: Dict[str, Any] = Field(default_factory=dict)


class CheckModel(BaseModel):
    scenario: str
    check: str
    passed: bool
    detail: str = ""


class CorpusModel(_Report):
    passed: int
    failed: int
    checks: List[CheckModel]


def _text(value: Any) -> Optional[str]:
    return None if value is None else str(value)


def _strategy(strategy: MixedStrategy) -> List[str]:
    return [str(w) for w in strategy.weights]


def _profile(profile: MixedProfile) -> List[List[str]]:
    return [_strategy(s) for s in profile]


def _polynomial(polynomial, **fields) -> PolynomialEntry:
    return PolynomialEntry(
        polynomial=str(polynomial),
        coefficients=polynomial.coefficient_map(),
        diagonal=str(polynomial.diagonal().as_expr()),
        **fields,
    )


def certificate_model(game: Game, certificate: InvaderCertificate) -> CertificateModel:
    """Serialize a certificate with populations numbered from 1."""
    assignment = certificate.assignment
    observed = [AssignmentEntry(types=list(theta), profile=_profile(profile))
                for theta, profile in sorted(assignment.observed.items())]
    unobserved = {str(j + 1): _strategy(s) for j, s in sorted(assignment.unobserved.items())}
    differences = [_polynomial(d.polynomial, population=d.population + 1, incumbent=d.incumbent)
                   for d in certificate.differences]
    slacks = [_polynomial(s.polynomial, population=s.population + 1, observed=s.observed, types=list(s.types),
                          action=game.action_sets[s.population][s.action])
              for s in certificate.slacks]
    validity = f"0 < eps_j = t < {certificate.bound} for every j in the coalition"
    if certificate.box is not None:
        validity = f"0 < eps_j < {certificate.box} for every j in the coalition; on the diagonal {validity}"
    return CertificateModel(
        route=certificate.route,
        coalition=[j + 1 for j in certificate.coalition],
        mutant_types=[t.label() for t in certificate.mutant_types],
        mode=certificate.mode.value,
        observed=observed,
        unobserved=unobserved,
        differences=differences,
        slacks=slacks,
        validity=validity,
        bound=str(certificate.bound),
        bound_exact=certificate.bound_exact,
        box=None if certificate.box is None else str(certificate.box),
    )


def validation_model(name: str, config: Configuration, report: ValidationReport,
                     balanced: Optional[bool], fitness: Optional[List[List[Fraction]]] = None) -> ValidationModel:
    return ValidationModel(
        scenario=name,
        regime=config.kind.value,
        ok=report.ok,
        balanced=balanced,
        violation=report.violation.describe(config.game) if report.violation else None,
        fitness=[[str(v) for v in row] for row in (fitness or [])],
    )


def _detail(value: Any) -> Any:
    if isinstance(value, (tuple, list)):
        return [_detail(v) for v in value]
    if isinstance(value, (int, bool, str)) or value is None:
        return value
    return str(value)


def verdict_model(name: str, config: Configuration, verdict: StabilityVerdict, caps: Dict[str, Any]) -> VerdictModel:
    thresholds = {}
    if verdict.thresholds is not None:
        thresholds = {"high": _text(verdict.thresholds.high), "low": _text(verdict.thresholds.low)}
    return VerdictModel(
        scenario=name,
        regime=config.kind.value if config.regime.p is None else f"{config.kind.value} p={config.regime.p}",
        verdict=verdict.verdict.value,
        route=verdict.route.value,
        premises=list(verdict.premises),
        barrier=_text(verdict.barrier),
        reason=verdict.reason.value if verdict.reason else None,
        thresholds=thresholds,
        details={key: _detail(value) for key, value in sorted(verdict.details.items())},
        certificate=certificate_model(config.game, verdict.certificate) if verdict.certificate else None,
        caps=caps,
    )


def to_json(report: BaseModel) -> str:
    return report.model_dump_json(indent=2)


def summary_lines(report: BaseModel) -> List[str]:
    """Short human-readable table of a report's scalar fields."""
    lines = []
    for key, value in report.model_dump().items():
        if isinstance(value, (dict, list)) or key in ("schema_version", "version"):
            continue
        lines.append(f"{key:<12} {value}")
    return lines
