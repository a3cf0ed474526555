import json

import pytest

from prefstab.cli import ExitCode, main
from prefstab.corpus import SCENARIO_DIR


def _path(name: str) -> str:
    return str(SCENARIO_DIR / f"{name}.json")


def _pd_file(tmp_path, shares, observed):
    data = {
        "name": "pd_variant",
        "game": {
            "actions": [["C1", "D1"], ["C2", "D2"]],
            "payoffs": {"C1,C2": [2, 2], "C1,D2": [0, 3], "D1,C2": [3, 0], "D1,D2": [1, 1]},
        },
        "populations": [
            {"types": [{"kind": "materialist"}], "shares": shares},
            {"types": [{"kind": "materialist"}], "shares": [1]},
        ],
        "regime": {"mode": "p1", "b": {"*": observed}},
    }
    path = tmp_path / "pd_variant.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_validate_ok(capsys):
    assert main(["validate", _path("ex1_battle_of_sexes")]) == ExitCode.OK
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is True
    assert report["balanced"] is True
    assert report["fitness"] == [["5"], ["5"]]


def test_validate_violation(tmp_path, capsys):
    assert main(["validate", _pd_file(tmp_path, [1], ["C1", "C2"])]) == ExitCode.VIOLATION
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is False
    assert report["violation"]


def test_share_sum_is_an_input_error(tmp_path, capsys):
    assert main(["validate", _pd_file(tmp_path, ["1/2"], ["D1", "D2"])]) == ExitCode.INPUT_ERROR
    assert "share-sum" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "absent.json")]) == ExitCode.INPUT_ERROR
    assert "Cannot read" in capsys.readouterr().err


@pytest.mark.parametrize("name, p, code, route", [
    ("ex6_pd", "1/2", ExitCode.UNSTABLE, "observability-dominator"),
    ("ex6_pd", "0", ExitCode.OK, "materialist-nash"),
    ("ex2_coordination_a12a22", "1", ExitCode.OK, "aggregate-strong-nash"),
])
def test_stability(capsys, name, p, code, route):
    assert main(["stability", _path(name), "--p", p]) == code
    assert json.loads(capsys.readouterr().out)["route"] == route


def test_stability_unknown_under_caps(capsys):
    assert main(["stability", _path("nongeneric_materialist"), "--max-nodes", "1"]) == ExitCode.UNKNOWN
    report = json.loads(capsys.readouterr().out)
    assert report["reason"] == "solver-limit"
    assert report["caps"]["max_nodes"] == 1


def test_stability_refuses_invalid_configuration(tmp_path, capsys):
    assert main(["stability", _pd_file(tmp_path, [1], ["C1", "C2"])]) == ExitCode.VIOLATION


def test_text_format(capsys):
    assert main(["--format", "text", "stability", _path("ex2_coordination_a12a22")]) == ExitCode.OK
    out = capsys.readouterr().out
    assert any(line.startswith("verdict") and "stable" in line for line in out.splitlines())


def test_invade(capsys):
    assert main(["invade", _path("ex6_pd"), "--p", "1", "--coalition", "1,2"]) == ExitCode.UNSTABLE
    report = json.loads(capsys.readouterr().out)
    assert report["found"] is True
    assert report["coalition"] == [1, 2]
    assert report["certificate"]["coalition"] == [1, 2]


def test_invade_exhausted(capsys):
    assert main(["invade", _path("ex6_pd"), "--p", "1", "--coalition", "1"]) == ExitCode.UNKNOWN
    report = json.loads(capsys.readouterr().out)
    assert report["found"] is False
    assert report["reason"] == "search-exhausted"


def test_invade_rejects_bad_coalition():
    with pytest.raises(SystemExit):
        main(["invade", _path("ex6_pd"), "--coalition", "0"])


def test_simulate_writes_csv(tmp_path):
    output = tmp_path / "trajectory.csv"
    assert main(["simulate", _path("ex6_pd"), "--steps", "5", "--exact", "--output", str(output)]) == ExitCode.OK
    lines = output.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "step,population,type-id,share,fitness"
    assert len(lines) == 1 + 6 * 4


def test_simulate_needs_mutants(capsys):
    assert main(["simulate", _path("ex1_battle_of_sexes")]) == ExitCode.INPUT_ERROR
    assert "declares no mutants" in capsys.readouterr().err


def test_examples(capsys):
    assert main(["examples", "--filter", "ex3"]) == ExitCode.OK
    report = json.loads(capsys.readouterr().out)
    assert report["failed"] == 0
    assert {c["scenario"] for c in report["checks"]} == {"ex3_bilateral_deviation"}
