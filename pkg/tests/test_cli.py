import json

import pytest

from hopfx.cli import run

from conftest import REF_DELTA_STAR, REF_R_STAR


def _lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


def test_classify_csv(capsys):
    code = run(["classify", "--n", "2", "--beta0", "1",
                "--delta", str(REF_DELTA_STAR), "--k", "1.5", "--r", "10"])
    assert code == 0
    header, row = _lines(capsys)
    cols = dict(zip(header.split(","), row.split(",")))
    assert cols["case"] == "I_A"
    assert cols["asymptotically_stable"] == "true"
    assert float(cols["r_lo"]) < 10 < float(cols["r_hi"])


def test_classify_json_round_trip(capsys):
    code = run(["classify", "--n", "1", "--beta0", "1", "--delta", "0.1",
                "--k", "1.5", "--r", "5", "--format", "json"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["case"] == "II"
    assert obj["asymptotically_stable"] is True


def test_usage_error_exit_1(capsys):
    assert run(["classify", "--n", "2"]) == 1
    assert run(["no-such-command"]) == 1
    capsys.readouterr()


def test_domain_error_exit_2(capsys):
    code = run(["lyapunov", "--n", "2", "--beta0", "1",
                "--delta", "1000", "--k", "1.5"])
    assert code == 2
    assert "domain error" in capsys.readouterr().err


def test_lyapunov_json(capsys):
    code = run(["lyapunov", "--n", "2", "--beta0", "1",
                "--delta", str(REF_DELTA_STAR), "--k", "1.5",
                "--l2", "--format", "json"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert abs(obj["l1"]) < 1e-8
    assert obj["l2"] == pytest.approx(-0.008109801, abs=2e-6)
    assert obj["r_star"] == pytest.approx(REF_R_STAR, rel=1e-10)
    assert "g_21" in obj["coefficients"]


def test_find_codim2(capsys):
    code = run(["find-codim2", "--n", "2", "--beta0", "1", "--k", "1.5",
                "--format", "json"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["delta_star"] == pytest.approx(REF_DELTA_STAR, rel=1e-7)
    assert obj["r_star"] == pytest.approx(REF_R_STAR, rel=1e-6)
    assert obj["l2"] < 0


def test_output_file_and_round_trip(tmp_path, capsys):
    out = tmp_path / "surface.csv"
    code = run(["hopf-surface", "--n", "2", "--beta0", "1",
                "--k-min", "1.2", "--k-max", "1.8", "--k-steps", "3",
                "--delta-min", "0.02", "--delta-max", "0.06",
                "--delta-steps", "2", "--output", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "k,delta,r,omega"
    for line in lines[1:]:
        k, d, r, w = (float(v) for v in line.split(","))
        # 17 significant digits: parsing the text recovers the float
        assert f"{r:.17g}" in line


def test_tables_threads_deterministic(tmp_path, capsys, monkeypatch):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps({"n_values": [1.0, 2.0],
                                "beta0_values": [1.0],
                                "k_values": [1.3, 1.7]}))
    monkeypatch.delenv("HOPFX_THREADS", raising=False)
    assert run(["tables", "--grid", str(grid)]) == 0
    seq = capsys.readouterr().out
    monkeypatch.setenv("HOPFX_THREADS", "4")
    assert run(["tables", "--grid", str(grid)]) == 0
    par = capsys.readouterr().out
    assert par == seq
    assert "# 2 cells with no l1 sign change" in seq


def test_tables_check_exit_4(tmp_path, capsys):
    # a grid missing most published cells must fail the golden check
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps({"n_values": [2.0], "beta0_values": [1.0],
                                "k_values": [1.5]}))
    code = run(["tables", "--grid", str(grid), "--check"])
    captured = capsys.readouterr()
    assert code == 4
    assert "mismatch" in captured.out or captured.err


def test_bad_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("HOPFX_THREADS", "zero")
    grid_args = ["tables"]
    assert run(grid_args) == 1
    assert "HOPFX_THREADS" in capsys.readouterr().err


def test_simulate_csv(capsys):
    code = run(["simulate", "--n", "2", "--beta0", "1", "--delta", "0.08",
                "--k", "1.5", "--r", "6", "--offset", "0.01",
                "--tmax", "1", "--steps-per-delay", "100"])
    assert code == 0
    lines = _lines(capsys)
    assert lines[0] == "t,x"
    assert float(lines[1].split(",")[0]) == pytest.approx(-6.0)
