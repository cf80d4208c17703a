import csv
import json

import pytest

from chainplan.cli import main

FIG7A = {
    "order": 3,
    "x0": [1.0, -0.375, 4.0],
    "xf": [0.0, 0.0, 0.0],
    "M": [1.0, 1.0, 1.5, 4.0],
}


def write_problem(tmp_path, data, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


class TestPlan:
    def test_cruise_profile(self, tmp_path):
        inp = write_problem(tmp_path, FIG7A)
        out = str(tmp_path / "traj.json")
        assert main(["plan", "--input", inp, "--output", out]) == 0
        traj = json.loads((tmp_path / "traj.json").read_text())
        assert traj["asl"] == "-0 -1 +0 -2 +0 +1 -0"
        assert traj["t_f"] == pytest.approx(6.3107638888888889, abs=1e-9)
        assert len(traj["segments"]) == 7
        assert traj["segments"][0]["start"] == [1.0, -0.375, 4.0]

    def test_zero_motion(self, tmp_path):
        data = dict(FIG7A, xf=FIG7A["x0"])
        inp = write_problem(tmp_path, data)
        out = str(tmp_path / "t.json")
        assert main(["plan", "--input", inp, "--output", out]) == 0
        traj = json.loads((tmp_path / "t.json").read_text())
        assert traj["t_f"] == 0.0
        assert traj["segments"] == []

    def test_malformed_json_exit_3(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["plan", "--input", str(bad)]) == 3

    def test_missing_file_exit_3(self, tmp_path):
        assert main(["plan", "--input", str(tmp_path / "nope.json")]) == 3

    def test_infeasible_input_exit_1(self, tmp_path):
        data = dict(FIG7A, x0=[2.0, 0.0, 0.0])
        inp = write_problem(tmp_path, data)
        assert main(["plan", "--input", inp]) == 1

    def test_unplannable_exit_2(self, tmp_path):
        data = dict(FIG7A, x0=[0.52, -0.17, 2.73], xf=[0.37, -1.16, 3.61])
        inp = write_problem(tmp_path, data)
        assert main(["plan", "--input", inp]) == 2

    def test_cross_check_runs(self, tmp_path, capsys):
        inp = write_problem(tmp_path, FIG7A)
        out = str(tmp_path / "t.json")
        assert main(["plan", "--input", inp, "--output", out,
                     "--cross-check"]) == 0
        assert "cross-check" in capsys.readouterr().err

    def test_csv_sampling(self, tmp_path):
        inp = write_problem(tmp_path, FIG7A)
        out = str(tmp_path / "t.json")
        csv_path = tmp_path / "t.csv"
        assert main(["plan", "--input", inp, "--output", out,
                     "--csv", str(csv_path), "--sample-dt", "0.01"]) == 0
        with open(csv_path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "u", "x1", "x2", "x3"]
        body = [[float(v) for v in row] for row in rows[1:]]
        assert body[0][0] == 0.0
        assert body[0][2:] == pytest.approx([1.0, -0.375, 4.0])
        t_f = json.loads((tmp_path / "t.json").read_text())["t_f"]
        assert body[-1][0] == pytest.approx(t_f, abs=1e-12)
        assert body[-1][2:] == pytest.approx([0.0, 0.0, 0.0], abs=1e-6)
        times = [r[0] for r in body]
        assert times == sorted(times)
        assert len(times) == len(set(times))


class TestEnumerate:
    def test_order_two(self, capsys):
        assert main(["enumerate", "--order", "2"]) == 0
        assert capsys.readouterr().out == "00\n010\n"

    def test_order_one(self, capsys):
        assert main(["enumerate", "--order", "1"]) == 0
        assert capsys.readouterr().out == "0\n"

    def test_order_three_has_24_lines(self, capsys):
        assert main(["enumerate", "--order", "3"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert len(lines) == 24
        assert lines == sorted(lines)


class TestMetrics:
    def test_scores_planned_trajectory(self, tmp_path):
        inp = write_problem(tmp_path, FIG7A)
        tout = str(tmp_path / "t.json")
        main(["plan", "--input", inp, "--output", tout])
        mout = str(tmp_path / "m.json")
        assert main(["metrics", "--trajectory", tout, "--problem", inp,
                     "--output", mout]) == 0
        scores = json.loads((tmp_path / "m.json").read_text())
        assert scores["success"] is True
        assert scores["E_m"] == 0.0
        assert scores["E_s"] <= 1e-6
        assert 0.0 <= scores["T_v"] <= 1.0
        assert scores["t_f"] == pytest.approx(6.31076388, abs=1e-6)


class TestBatch:
    def test_deterministic_report(self, tmp_path):
        a = str(tmp_path / "a.json")
        b = str(tmp_path / "b.json")
        args = ["batch", "--order", "2", "--count", "3", "--seed", "7",
                "--bounds", "[1, 1, null]"]
        assert main(args + ["--output", a]) == 0
        assert main(args + ["--output", b]) == 0
        assert (tmp_path / "a.json").read_bytes() == \
            (tmp_path / "b.json").read_bytes()

    def test_aggregates(self, tmp_path):
        out = str(tmp_path / "r.json")
        assert main(["batch", "--order", "2", "--count", "4", "--seed", "1",
                     "--bounds", "[1, 1, null]", "--output", out]) == 0
        report = json.loads((tmp_path / "r.json").read_text())
        assert report["aggregate"]["R_s"] == 1.0
        assert len(report["problems"]) == 4
        assert all(p["E_m"] == 0.0 for p in report["problems"])

    def test_empty_batch(self, tmp_path):
        out = str(tmp_path / "r.json")
        assert main(["batch", "--order", "2", "--count", "0",
                     "--output", out]) == 0
        report = json.loads((tmp_path / "r.json").read_text())
        assert report["aggregate"]["R_s"] is None
        assert report["problems"] == []

    def test_bad_bounds_exit_3(self, tmp_path):
        assert main(["batch", "--order", "2", "--count", "1",
                     "--bounds", "oops"]) == 3

    def test_timing_flag_adds_section(self, tmp_path):
        out = str(tmp_path / "r.json")
        assert main(["batch", "--order", "2", "--count", "1", "--timing",
                     "--bounds", "[1, 1, null]", "--output", out]) == 0
        report = json.loads((tmp_path / "r.json").read_text())
        assert "timing" in report
