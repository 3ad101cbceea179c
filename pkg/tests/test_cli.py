import json

import pytest

import sperner_lab.cli as cli
import sperner_lab.solver as solver
from sperner_lab.cli import main
from sperner_lab.solver import NoSolutionError


def read_records(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


# ---------------------------------------------------------------------------
# exit code 1: argument problems


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["build", "--n", "3"],
        ["solve", "--n", "3", "--r", "2", "--m", "one", "--scheme", "longest"],
        ["solve", "--n", "3", "--r", "2", "--m", "1,1", "--scheme", "random",
         "--scheme", "random", "--tiebreak", "1,2,3"],
        ["solve", "--n", "3", "--r", "2", "--m", "1,1", "--scheme", "longest",
         "--scheme", "longest", "--scheme", "longest",
         "--tiebreak", "1,2,3", "--tiebreak", "1,2,3"],
        ["verify-maps", "--r", "3", "--m", "2"],
        ["verify-maps", "--scheme", "longest"],
        ["verify-maps", "--r", "3", "--scheme", "longest"],
        ["verify-maps", "--r", "3", "--scheme", "longest", "--m", "2", "--n", "4"],
        ["sweep", "--n", "3,4", "--r", "2", "--scheme", "longest"],
        ["sweep", "--n", "3", "--r", "2", "--scheme", "random"],
        ["replay", "--in", "/no/such/report.jsonl"],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    assert main(argv) == 1
    assert "usage error" in capsys.readouterr().err


def test_replay_needs_a_config_first_line(tmp_path, capsys):
    bad = tmp_path / "report.jsonl"
    bad.write_text('{"record":"summary"}\n')
    assert main(["replay", "--in", str(bad)]) == 1
    assert "config record" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# happy paths


def test_build_report(tmp_path, capsys):
    out = tmp_path / "build.jsonl"
    assert main(["build", "--n", "3", "--r", "3", "--out", str(out)]) == 0
    records = read_records(out)
    assert [r["record"] for r in records] == ["config", "complex", "summary"]
    config = records[0]
    assert config["command"] == "build"
    assert config["params"] == {"n": 3, "r": 3}
    assert set(config) == {
        "record", "command", "params", "connectivity", "package", "numpy", "timestamp",
    }
    assert records[2] == {
        "record": "summary", "vertices": 10, "facets": 9, "faces": 37,
    }
    assert "faces=37 facets=9 vertices=10" in capsys.readouterr().out


def test_records_go_to_stdout_without_out_flag(capsys):
    assert main(["build", "--n", "2", "--r", "2"]) == 0
    captured = capsys.readouterr()
    lines = [json.loads(x) for x in captured.out.splitlines()]
    assert [r["record"] for r in lines] == ["config", "complex", "summary"]
    assert "vertices=3" in captured.err


def test_solve_report(tmp_path, capsys):
    out = tmp_path / "solve.jsonl"
    argv = [
        "solve", "--n", "3", "--r", "3", "--m", "1,1",
        "--scheme", "random", "--scheme", "random",
        "--seed", "1", "--mode", "facets", "--out", str(out),
    ]
    assert main(argv) == 0
    records = read_records(out)
    assert records[0]["record"] == "config"
    assert records[0]["params"]["mode"] == "facets"
    assert records[0]["params"]["tiebreaks"] == [None, None]
    body = records[-1]
    assert body["record"] == "summary"
    assert body["solutions"] >= body["full"] >= 1
    assert set(body["shapes"]) <= {"star", "path", "other", "not-a-tree", "not-applicable"}
    for rec in records[1:-1]:
        assert rec["record"] == "solution"
        assert rec["size_ok"] is True


def test_named_scheme_tiebreaks_are_materialized(tmp_path):
    out = tmp_path / "solve.jsonl"
    argv = [
        "solve", "--n", "3", "--r", "2", "--m", "1,1",
        "--scheme", "longest", "--scheme", "ranked:2",
        "--tiebreak", "3,2,1", "--out", str(out),
    ]
    assert main(argv) == 0
    config = read_records(out)[0]
    assert config["params"]["tiebreaks"] == [[3, 2, 1], [3, 2, 1]]

    out2 = tmp_path / "solve2.jsonl"
    argv = [
        "solve", "--n", "3", "--r", "2", "--m", "2",
        "--scheme", "longest", "--out", str(out2),
    ]
    assert main(argv) == 0
    assert read_records(out2)[0]["params"]["tiebreaks"] == [[1, 2, 3]]


def test_verify_maps_with_winding(tmp_path, capsys):
    out = tmp_path / "verify.jsonl"
    argv = [
        "verify-maps", "--samples", "200", "--seed", "1",
        "--r", "3", "--scheme", "longest", "--m", "2", "--out", str(out),
    ]
    assert main(argv) == 0
    records = read_records(out)
    kinds = [r["record"] for r in records]
    assert kinds[0] == "config" and kinds[-1] == "summary"
    assert kinds.count("property") == 7
    winding = next(r for r in records if r["record"] == "winding")
    assert winding["winding"] == 1 and winding["stable"] and winding["pass"]
    assert records[-1] == {"record": "summary", "pass": True}
    text = capsys.readouterr().out
    assert "boundary winding: ok value=1" in text
    assert "pass=True" in text


def test_sweep_log_and_resume(tmp_path, capsys):
    log = tmp_path / "sweep.jsonl"
    argv = [
        "sweep", "--n", "3", "--r", "2,3", "--colorings", "1,2",
        "--seeds", "1", "--seed", "0", "--out", str(log),
    ]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert "instances=8 ran=8 resumed=0" in first
    records = read_records(log)
    assert records[0]["record"] == "config"
    assert len(records) == 9
    for rec in records[1:]:
        assert rec["full_solutions"] >= 1 and rec["candidate"] is False

    assert main(argv) == 0
    second = capsys.readouterr().out
    assert "instances=8 ran=0 resumed=8" in second
    assert read_records(log) == records


def test_sweep_with_fixed_schemes(tmp_path):
    log = tmp_path / "star.jsonl"
    argv = [
        "sweep", "--n", "4", "--r", "2", "--m", "1,1,1",
        "--scheme", "ranked:1,4", "--scheme", "ranked:2,4", "--scheme", "ranked:3,4",
        "--out", str(log),
    ]
    assert main(argv) == 0
    records = read_records(log)
    assert len(records) == 2
    assert records[1]["schemes"] == ["ranked:1,4", "ranked:2,4", "ranked:3,4"]
    assert records[1]["full_solutions"] >= 1


# ---------------------------------------------------------------------------
# replay


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "--n", "3", "--r", "3"],
        ["solve", "--n", "3", "--r", "3", "--m", "1,1",
         "--scheme", "random", "--scheme", "random", "--seed", "2"],
        ["verify-maps", "--samples", "200", "--seed", "4",
         "--r", "3", "--scheme", "longest", "--m", "2"],
        ["sweep", "--n", "3", "--r", "2", "--colorings", "1,2", "--seeds", "1"],
    ],
)
def test_replay_matches_each_command(tmp_path, capsys, argv):
    report = tmp_path / "report.jsonl"
    assert main(argv + ["--out", str(report)]) == 0
    capsys.readouterr()
    copy = tmp_path / "copy.jsonl"
    assert main(["replay", "--in", str(report), "--out", str(copy)]) == 0
    assert "match" in capsys.readouterr().out
    regenerated = read_records(copy)
    original = read_records(report)
    assert len(regenerated) == len(original)


def test_replay_flags_a_tampered_report(tmp_path, capsys):
    report = tmp_path / "report.jsonl"
    assert main(["build", "--n", "2", "--r", "3", "--out", str(report)]) == 0
    records = read_records(report)
    records[-1]["facets"] = records[-1]["facets"] + 1
    report.write_text("\n".join(json.dumps(r) for r in records) + "\n")
    capsys.readouterr()
    assert main(["replay", "--in", str(report)]) == 2
    out = capsys.readouterr().out
    assert out.startswith("mismatch")
    assert "record 2" in out


# ---------------------------------------------------------------------------
# failure statuses


def test_failed_property_suite_exits_two(monkeypatch, capsys):
    def fake(samples, seed, n_colors, m):
        return [
            {
                "record": "property",
                "name": "always_wrong",
                "samples": samples,
                "worst": 1.0,
                "bound": 0.0,
                "pass": False,
            }
        ], False

    monkeypatch.setattr(cli, "verify_suites", fake)
    assert main(["verify-maps", "--samples", "10"]) == 2
    err = capsys.readouterr().err
    assert "always_wrong: FAIL" in err
    assert "pass=False" in err


def test_missing_guaranteed_solution_exits_three(monkeypatch, capsys):
    def no_luck(pc, colorings, m, mode, context):
        raise NoSolutionError({"n": pc.n, "r": pc.r})

    monkeypatch.setattr(cli, "find_solutions", no_luck)
    argv = ["solve", "--n", "3", "--r", "2", "--m", "1,1",
            "--scheme", "random", "--scheme", "random"]
    assert main(argv) == 3
    captured = capsys.readouterr()
    records = [json.loads(x) for x in captured.out.splitlines()]
    assert records[-1] == {"record": "violation", "bundle": {"n": 3, "r": 2}}
    assert "reproduction bundle" in captured.err


def test_solutions_without_fullness_exit_three(monkeypatch):
    monkeypatch.setattr(cli, "find_solutions", lambda *a, **k: ())
    argv = ["solve", "--n", "3", "--r", "2", "--m", "1,1",
            "--scheme", "random", "--scheme", "random"]
    assert main(argv) == 3


def test_sweep_violation_exits_three(tmp_path, monkeypatch, capsys):
    real = solver.run_sweep_instance

    def fake(params):
        rec = real(params)
        if params["m"] == [0, 2]:
            return {"__violation__": {"n": params["n"], "r": params["r"]}}
        return rec

    monkeypatch.setattr(solver, "run_sweep_instance", fake)
    log = tmp_path / "sweep.jsonl"
    argv = ["sweep", "--n", "3", "--r", "2", "--colorings", "2",
            "--out", str(log)]
    assert main(argv) == 3
    assert "reproduction bundle" in capsys.readouterr().out
    tail = read_records(log)[-1]
    assert tail["record"] == "violation"


def test_log_env_smoke(monkeypatch):
    monkeypatch.setenv("SPERNER_LAB_LOG", "INFO")
    assert main(["build", "--n", "2", "--r", "2"]) == 0
