import json

from prefstab.analysis.options import AnalysisOptions
from prefstab.analysis.stability import check_stability
from prefstab.populations.configuration import validate_configuration
from prefstab.reporting import (
    certificate_model,
    summary_lines,
    to_json,
    validation_model,
    verdict_model,
)


def test_validation_report(scenario):
    loaded = scenario("ex1_battle_of_sexes")
    report = validation_model(loaded.name, loaded.config, validate_configuration(loaded.config), True, [[5], [5]])
    data = json.loads(to_json(report))
    assert data["schema_version"] == "1.0"
    assert data["regime"] == "p1"
    assert data["ok"] is True
    assert data["violation"] is None
    assert data["fitness"] == [["5"], ["5"]]


def test_stable_verdict_report(scenario):
    loaded = scenario("ex2_coordination_a12a22")
    options = AnalysisOptions()
    data = json.loads(to_json(verdict_model(loaded.name, loaded.config, check_stability(loaded.config), options.caps())))
    assert data["verdict"] == "stable"
    assert data["route"] == "aggregate-strong-nash"
    assert data["barrier"] == "1/3"
    assert data["certificate"] is None
    assert data["caps"]["grid_resolution"] == options.grid_resolution
    assert data["caps"]["mode"] == "per_population"


def test_partial_verdict_report(scenario):
    loaded = scenario("ex6_pd")
    verdict = check_stability(loaded.config)
    data = json.loads(to_json(verdict_model(loaded.name, loaded.config, verdict, {})))
    assert data["regime"] == "partial p=1/2"
    assert data["thresholds"]["high"] == "0"
    assert data["certificate"]["route"] == "observability-dominator"


def test_certificate_numbers_populations_from_one(scenario):
    loaded = scenario("ex2_coordination_a11a21")
    certificate = check_stability(loaded.config).certificate
    model = certificate_model(loaded.game, certificate)
    assert model.coalition == [1, 2]
    assert {d.population for d in model.differences} == {1, 2}
    assert all(s.population in (1, 2) for s in model.slacks)
    assert model.bound == str(certificate.bound)
    assert "eps_j = t" in model.validity
    assert certificate.box is not None
    assert model.box == str(certificate.box)
    assert model.validity.startswith(f"0 < eps_j < {certificate.box} ")


def test_summary_skips_nested_fields(scenario):
    loaded = scenario("ex1_battle_of_sexes")
    report = validation_model(loaded.name, loaded.config, validate_configuration(loaded.config), True)
    lines = summary_lines(report)
    assert any(line.startswith("scenario") and "ex1_battle_of_sexes" in line for line in lines)
    assert not any(line.startswith("fitness") for line in lines)
