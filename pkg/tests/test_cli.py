import json
import os

import pytest

from sncgame.cli import main
from sncgame.fixtures import fixture_text


@pytest.fixture
def fig2a_file(tmp_path):
    path = tmp_path / "fig2a.json"
    path.write_text(fixture_text("fig2a"))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert not err, err
    return code, json.loads(out)


def test_nash_empty_exits_2(capsys, fig2a_file):
    code, rep = report(capsys, "nash", "--game", fig2a_file)
    assert code == 2
    assert rep["schema_version"] == 1
    assert rep["result"]["count"] == 0


def test_nash_bundled_fixture_by_name(capsys):
    code, rep = report(capsys, "nash", "--game", "fig3")
    assert code == 0
    assert rep["result"]["count"] == 2
    assert all(e["strict"] for e in rep["result"]["equilibria"])


def test_indecomposable_exit_codes(capsys):
    code, rep = report(capsys, "indecomposable", "--game", "fig5",
                       "--hplus", "3,2,0,2")
    assert code == 0 and rep["result"]["indecomposable"]
    code, rep = report(capsys, "indecomposable", "--game", "fig5",
                       "--hplus", "1,1,1,1")
    assert code == 2
    assert rep["result"]["witness"] == [["1", "4"], ["2", "3"]]


def test_simulate_csv(capsys, fig2a_file):
    code, out, err = run(capsys, "simulate", "--game", fig2a_file,
                         "--seed", "7", "--steps", "100", "--format", "csv")
    assert code == 0 and not err
    lines = out.strip().splitlines()
    assert lines[0] == "step,deviator_label,profile_bitmask_hex"
    assert len(lines) > 1


def test_simulate_budget_report(capsys, fig2a_file):
    code, rep = report(capsys, "simulate", "--game", fig2a_file,
                       "--seed", "7", "--steps", "100")
    assert code == 0
    assert rep["result"]["termination"] == "budget"


def test_simulate_deterministic(capsys, fig2a_file):
    _, rep1 = report(capsys, "simulate", "--game", fig2a_file, "--seed", "9")
    _, rep2 = report(capsys, "simulate", "--game", fig2a_file, "--seed", "9")
    assert rep1["result"] == rep2["result"]


def test_simulate_plot(capsys, tmp_path, fig2a_file):
    plot = tmp_path / "traj.png"
    code, rep = report(capsys, "simulate", "--game", fig2a_file,
                       "--seed", "7", "--steps", "50",
                       "--plot", str(plot))
    assert code == 0
    assert plot.exists() and plot.stat().st_size > 0


def test_out_file_written_atomically(capsys, tmp_path, fig2a_file):
    out = tmp_path / "report.json"
    code, stdout, _ = run(capsys, "balance", "--game", "fig5",
                          "--out", str(out))
    assert code == 0
    assert stdout == ""
    rep = json.loads(out.read_text())
    assert rep["result"]["balanced"]
    leftovers = [p for p in os.listdir(tmp_path) if p.endswith(".tmp")]
    assert not leftovers


def test_balance_unbalanced_exit_2(capsys):
    code, rep = report(capsys, "balance", "--game", "fig4")
    assert code == 2
    assert not rep["result"]["balanced"]
    assert rep["result"]["witness_cycle"]


def test_cohesion_variants(capsys):
    code, rep = report(capsys, "cohesion", "--game", "fig1", "--set", "R",
                       "--a", "1")
    assert code == 0 and rep["result"]["mode"] == "consensus"
    code, rep = report(capsys, "cohesion", "--game", "fig1", "--set", "R")
    assert code == 2 and rep["result"]["mode"] == "strict"
    code, rep = report(capsys, "cohesion", "--game", "fig4", "--set", "R",
                       "--tau", "tau")
    assert code == 0 and rep["result"]["mode"] == "polarized"


def test_existence_and_stability(capsys):
    code, rep = report(capsys, "existence", "--game", "fig4", "--set", "R",
                       "--tau", "tau")
    assert code == 0
    assert rep["result"]["equilibrium"]["actions"]["1"] == 1
    code, rep = report(capsys, "stability", "--game", "fig8", "--set", "R",
                       "--a", "1")
    assert code == 2
    assert rep["result"]["tier"] == "hypotheses-failed"
    code, rep = report(capsys, "stability", "--game", "fig7", "--set", "R",
                       "--a", "1", "--empirical")
    assert code == 0
    assert rep["result"]["tier"] == "stable-subset"
    assert rep["result"]["empirical"]["stable_subset_exists"]


def test_reach_default_nash_target(capsys):
    code, rep = report(capsys, "reach", "--game", "fig3")
    assert code == 2
    assert not rep["result"]["globally_br_reachable"]
    code, rep = report(capsys, "reach", "--game", "example4:1")
    assert code == 0
    assert rep["result"]["globally_br_stable"]


def test_potential_obstruction(capsys, fig2a_file):
    code, rep = report(capsys, "potential", "--game", fig2a_file)
    assert code == 2
    obstruction = rep["result"]["obstruction"]
    assert abs(obstruction["cycle_sum"]) == 8
    assert len(obstruction["cycle_bitmasks_hex"]) == 4


def test_usage_error_exit_1(capsys):
    code, out, err = run(capsys, "nash")
    assert code == 1 and "required" in err
    code, out, err = run(capsys, "nash", "--game", "no-such-file.json")
    assert code == 1 and "not found" in err
    code, out, err = run(capsys, "nash", "--game", "fig3", "--format", "csv")
    assert code == 1 and "csv" in err


def test_parse_error_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nodes": ["a"], "edges": [{"from": "a", "to": "a", "weight": 1}]}')
    code, out, err = run(capsys, "nash", "--game", str(bad))
    assert code == 1 and err


def test_cap_exceeded_exit_3(capsys):
    code, out, err = run(capsys, "nash", "--game", "fig1", "--cap", "4")
    assert code == 3
    assert "cap" in err.lower()


def test_cap_env_var(capsys, monkeypatch):
    monkeypatch.setenv("SNCGAME_CAP", "4")
    code, out, err = run(capsys, "nash", "--game", "fig1")
    assert code == 3
    monkeypatch.setenv("SNCGAME_CAP", "not-a-number")
    code, out, err = run(capsys, "nash", "--game", "fig1")
    assert code == 1
