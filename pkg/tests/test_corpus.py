import pytest

from prefstab.corpus import SCENARIO_DIR, CorpusError, run_corpus, scenario_paths


def test_scenarios_are_bundled():
    stems = {path.stem for path in scenario_paths()}
    assert {"ex1_battle_of_sexes", "ex5_p0", "ex6_pd", "nongeneric_dominant"} <= stems


def test_filter_selects_by_name():
    assert [p.stem for p in scenario_paths("ex2")] == ["ex2_coordination_a11a21", "ex2_coordination_a12a22"]
    assert scenario_paths("no-such-scenario") == []


def test_empty_directory_is_an_error(monkeypatch, tmp_path):
    monkeypatch.setattr("prefstab.corpus.SCENARIO_DIR", tmp_path)
    with pytest.raises(CorpusError):
        scenario_paths()


@pytest.mark.parametrize("stem", sorted(p.stem for p in SCENARIO_DIR.glob("*.json")))
def test_corpus_passes(stem):
    report = run_corpus(stem)
    failures = [f"{c.check}: {c.detail}" for c in report.checks if not c.passed]
    assert report.passed > 0
    assert failures == []


def test_unobserved_example_pins_unknown_outcome():
    report = run_corpus("ex5_p0")
    outcome = {c.check: c for c in report.checks}
    assert outcome["verdict"].passed and outcome["verdict"].detail == "unknown"
    assert outcome["reason"].passed and outcome["reason"].detail == "search-exhausted"
    assert outcome["every pure entry keeps a nearby equilibrium"].passed
