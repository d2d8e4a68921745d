import json
import math
import subprocess
import sys

import pytest

from hannay_vdp.cli import ResultTable, export_table, main, read_table


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_freq_prints_series_value(capsys):
    code, out, _ = run_cli(["freq", "--omega", "1", "--eps", "0.3",
                            "--order", "4"], capsys)
    assert code == 0
    assert "0.9944198242" in out


def test_freq_with_measure(capsys):
    code, out, _ = run_cli(["freq", "--omega", "1", "--eps", "0.3",
                            "--measure"], capsys)
    assert code == 0
    assert "measured frequency" in out
    measured = float(out.split("measured frequency:")[1].split()[0])
    assert abs(measured - 0.99441982421875) <= 1e-5


def test_hannay_square_output(capsys):
    code, out, _ = run_cli(["hannay", "--loop", "square", "--omega",
                            "0.6:0.8", "--eps", "0.1:0.3"], capsys)
    assert code == 0
    assert "0.01041667" in out
    assert "quoted +0.010400" in out


def test_hannay_ellipse_flags_discrepancy(capsys):
    code, out, _ = run_cli(["hannay", "--loop", "ellipse"], capsys)
    assert code == 0
    assert "0.01287879" in out
    assert "0.0147" in out


def test_no_arguments_is_usage_error(capsys):
    code, _, err = run_cli([], capsys)
    assert code == 1
    assert "usage" in err.lower()


def test_bad_flag_value_is_usage_error(capsys):
    code, _, err = run_cli(["hannay", "--loop", "square", "--omega",
                            "nonsense"], capsys)
    assert code == 1


def test_invalid_loop_geometry_is_usage_error(capsys):
    code, _, err = run_cli(["hannay", "--loop", "square", "--omega",
                            "0.8:0.6", "--eps", "0.1:0.3"], capsys)
    assert code == 1


def test_numerical_failure_exit_code(capsys):
    code, _, err = run_cli(["cycle", "--omega", "1", "--eps", "0"], capsys)
    assert code == 2
    assert "numerical failure" in err


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "hannay_vdp.cli", "freq", "--omega", "1",
         "--eps", "0.1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "0.9993755534" in proc.stdout


def test_selftest_passes(capsys):
    code, out, _ = run_cli(["selftest"], capsys)
    assert code == 0
    assert "5/5 checks passed" in out


def test_resonance_command(capsys):
    code, out, _ = run_cli(["resonance", "--omega1", "1", "--omega2", "2.3",
                            "--eps", "0.02", "--quadratic-frequency"],
                           capsys)
    assert code == 0
    assert "secular drift prediction" in out
    assert "sup |alpha_full - alpha_avg|" in out


def test_export_round_trip_and_determinism(tmp_path):
    table = ResultTable(
        columns=["a", "b"],
        rows=[[1.0 / 3.0, 0.1], [math.pi, -2.5e-17]],
        provenance={"command": "test", "order": 4, "rel_tol": 1e-10},
    )
    p1, p2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
    export_table(table, p1)
    export_table(table, p2)
    assert p1.read_bytes() == p2.read_bytes()
    cols, rows, prov = read_table(p1)
    assert cols == ["a", "b"]
    assert rows[0][0] == 1.0 / 3.0 and rows[1][0] == math.pi
    assert rows[1][1] == -2.5e-17
    assert any("order" in line for line in prov)
    assert any("rel_tol" in line for line in prov)


def test_cycle_csv_export(tmp_path, capsys):
    path = tmp_path / "cycle.csv"
    code, out, _ = run_cli(["cycle", "--omega", "1", "--eps", "0.2",
                            "--n-theta", "64", "--csv", str(path)], capsys)
    assert code == 0
    cols, rows, prov = read_table(path)
    assert cols == ["theta", "R", "Omega", "psi"]
    assert len(rows) == 64
    assert any("n_theta" in line for line in prov)


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"omega": 1.0, "eps": 0.1, "order": 2}))
    code, out, _ = run_cli(["freq", "--config", str(cfg)], capsys)
    assert code == 0
    assert "order 2" in out
    code, out, _ = run_cli(["freq", "--config", str(cfg), "--order", "4"],
                           capsys)
    assert code == 0
    assert "order 4" in out
    assert "0.9993755534" in out


def test_fig1_small_run_with_partial_failure(tmp_path, capsys):
    csv = tmp_path / "fig1.csv"
    svg = tmp_path / "fig1.svg"
    code, out, _ = run_cli(
        ["fig1", "--loop", "square", "--T-cycles", "20,60,90",
         "--n-s", "16", "--csv", str(csv), "--svg", str(svg)], capsys)
    assert code == 0
    cols, rows, _ = read_table(csv)
    assert cols[-1] == "status"
    status = {r[0]: r[4] for r in rows}
    assert status[20.0].startswith("failed")
    assert status[60.0] == "ok" and status[90.0] == "ok"
    # asymptote column carries the quadrature value
    assert abs(rows[0][3] - 0.010416666666666668) <= 1e-12
    body = svg.read_text()
    assert body.startswith("<?xml") and "polyline" in body


def test_fig1_empty_T_list_usage_error(capsys):
    code, _, _ = run_cli(["fig1", "--loop", "square", "--T-cycles", ""],
                         capsys)
    assert code == 1


def test_geophase_command_csv(tmp_path, capsys):
    path = tmp_path / "geo.csv"
    code, out, _ = run_cli(
        ["geophase", "--loop", "square", "--T-cycles", "60",
         "--n-s", "16", "--csv", str(path)], capsys)
    assert code == 0
    assert "geometric" in out
    cols, rows, _ = read_table(path)
    assert "geometric_phase" in cols
    assert len(rows) == 1
