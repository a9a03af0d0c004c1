"""End-to-end tests of the command line driver."""

import csv
import io
import math
import sys

import numpy as np
import pytest

from s2xs2 import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_passes_and_exit_zero(capsys):
    code, out, _ = run(["verify", "mt", "--t", "0.5", "--n", "10", "--seed", "7"], capsys)
    assert code == 0
    assert "overall: PASS" in out
    assert "spectrum_vs_oracle" in out


def test_verify_failure_exit_one(capsys):
    # impossible tolerances force failures but the report is still emitted
    code, out, _ = run(
        ["verify", "mt", "--t", "0.5", "--n", "5", "--tol-scale", "1e-12"], capsys
    )
    assert code == 1
    assert "FAIL" in out


def test_usage_error_exit_two(capsys):
    code, _, err = run(["verify", "mt", "--t", "1.5"], capsys)
    assert code == 2
    assert "t must lie in (-1, 1)" in err


def test_unknown_family_exit_two():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "klein"])
    assert exc.value.code == 2


def test_json_report_determinism(capsys):
    argv = ["verify", "mt", "--t", "0.5", "--n", "8", "--seed", "7", "--format", "json"]
    _, out1, _ = run(argv, capsys)
    _, out2, _ = run(argv, capsys)
    assert out1 == out2
    assert '"schema": 1' in out1
    assert '"passed": true' in out1


def test_csv_report_columns(capsys):
    code, out, _ = run(
        ["verify", "s1rxs2", "--r", "0.6", "--n", "5", "--format", "csv"], capsys
    )
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["check", "n_points", "max_residual", "tolerance", "passed"]
    assert all(r[4] == "1" for r in rows[1:])


def test_sweep_mt_outer_curvature_product(capsys):
    code, out, _ = run(
        ["sweep", "mt", "--min", "-0.9", "--max", "0.9", "--steps", "10", "--format", "csv"],
        capsys,
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 10
    for r in rows:
        prod = float(r["lambda1"]) * float(r["lambda3"])
        assert abs(prod + 0.5) < 1e-6


def test_sweep_s1rxs2_mean_curvature(capsys):
    code, out, _ = run(
        ["sweep", "s1rxs2", "--min", "0.3", "--max", "0.9", "--steps", "4", "--format", "csv"],
        capsys,
    )
    rows = list(csv.DictReader(io.StringIO(out)))
    for r in rows:
        rr = float(r["param"])
        assert abs(float(r["H"]) - math.sqrt(1 - rr * rr) / (3 * rr)) < 1e-6
        assert abs(float(r["focal_radius"]) - math.asin(rr)) < 1e-4


def test_sweep_single_step(capsys):
    code, out, _ = run(
        ["sweep", "mt", "--min", "0.5", "--max", "0.5", "--steps", "1", "--format", "csv"],
        capsys,
    )
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 2  # header + one row


def test_flow_table(capsys):
    code, out, _ = run(
        [
            "flow", "mt", "--t", "0.5", "--s-max", "0.4", "--s-steps", "4",
            "--n", "4", "--format", "csv",
        ],
        capsys,
    )
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 5
    for r in rows:
        assert abs(float(r["C"])) < 1e-9
        assert float(r["H_spatial_std"]) < 1e-5
        assert r["past_focal"] == "0"


def test_flow_zero_distance(capsys):
    code, out, _ = run(
        ["flow", "s1rxs2", "--r", "0.6", "--s-max", "0", "--s-steps", "0",
         "--n", "2", "--format", "csv"],
        capsys,
    )
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert float(rows[0]["s"]) == 0.0
    assert float(rows[0]["detQ"]) == pytest.approx(1.0, abs=1e-12)
    assert float(rows[0]["C"]) == pytest.approx(1.0, abs=1e-12)


def test_out_file_and_plot(tmp_path, capsys):
    out_csv = tmp_path / "sweep.csv"
    code = cli.main(
        [
            "sweep", "mt", "--min", "-0.5", "--max", "0.5", "--steps", "3",
            "--format", "csv", "--out", str(out_csv), "--plot",
        ]
    )
    assert code == 0
    assert out_csv.exists()
    assert (tmp_path / "sweep.png").exists()


def test_verify_plot(tmp_path):
    out_json = tmp_path / "rep.json"
    code = cli.main(
        ["verify", "mt", "--t", "0.5", "--n", "5", "--format", "json",
         "--out", str(out_json), "--plot"]
    )
    assert code == 0
    assert (tmp_path / "rep.png").exists()
