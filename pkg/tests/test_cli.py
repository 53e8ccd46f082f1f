import json
import os

import numpy as np
import pytest

from maxlor.cli import (
    EXIT_CONFIG,
    EXIT_CONTAMINATED,
    EXIT_OK,
    EXIT_RUNTIME,
    main,
)


def write_cfg(tmp_path, name="cfg.json", **body):
    p = tmp_path / name
    p.write_text(json.dumps(body))
    return str(p)


def release_cfg(tmp_path, **extra):
    body = {
        "grid": {"x_min": -3.0, "x_max": 1.0, "n": 801},
        "mollifier": {"kind": "left"},
        "scaling": {"kind": "constant", "c": 0.1},
        "model": {"B0": 0.0, "T": 0.3},
        "solver": {"save_every": 8},
    }
    body.update(extra)
    return write_cfg(tmp_path, **body)


def read_csv_columns(path):
    rows = np.loadtxt(path, delimiter=",", skiprows=1)
    return rows


class TestValidate:
    def test_good_config_prints_run_id(self, tmp_path, capsys):
        cfg = release_cfg(tmp_path)
        assert main(["validate", "--config", cfg]) == EXIT_OK
        out = capsys.readouterr().out
        assert "ok: run id" in out

    def test_bad_config_lists_all_problems(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, grid={"n": 4}, model={"T": -1.0},
                        solver={"method": "leapfrog"})
        assert main(["validate", "--config", cfg]) == EXIT_CONFIG
        out = capsys.readouterr().out
        assert "grid:" in out and "model:" in out and "solver:" in out
        assert "invalid:" in out

    def test_missing_file(self, tmp_path, capsys):
        assert main(["validate", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG

    def test_malformed_json(self, tmp_path, capsys):
        p = tmp_path / "broken.json"
        p.write_text("{not json")
        assert main(["validate", "--config", str(p)]) == EXIT_CONFIG
        assert "json" in capsys.readouterr().err.lower()

    def test_unresolvable_kernel_is_caught_dry(self, tmp_path, capsys):
        cfg = release_cfg(tmp_path, grid={"x_min": -3.0, "x_max": 1.0, "n": 31})
        assert main(["validate", "--config", cfg]) == EXIT_CONFIG
        assert "cannot resolve" in capsys.readouterr().out


class TestSolve:
    def test_writes_states_summary_and_config(self, tmp_path):
        cfg = release_cfg(tmp_path)
        out = str(tmp_path / "out")
        assert main(["solve", "--config", cfg, "--out", out]) == EXIT_OK
        names = os.listdir(out)
        assert "summary.json" in names
        assert "meta.json" in names
        assert "config.json" in names
        assert "state_00000.csv" in names
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["status"] == "ok"
        assert summary["boundary_contaminated"] is False

    def test_byte_identical_across_reruns(self, tmp_path):
        cfg = release_cfg(tmp_path)
        o1, o2 = str(tmp_path / "a"), str(tmp_path / "b")
        assert main(["solve", "--config", cfg, "--out", o1]) == EXIT_OK
        assert main(["solve", "--config", cfg, "--out", o2]) == EXIT_OK
        for name in sorted(os.listdir(o1)):
            b1 = (tmp_path / "a" / name).read_bytes()
            b2 = (tmp_path / "b" / name).read_bytes()
            assert b1 == b2, name

    def test_zero_data_writes_zero_fields(self, tmp_path):
        cfg = release_cfg(
            tmp_path,
            initial={"E": {"kind": "zero"}, "u": {"kind": "zero"},
                     "sigma": {"kind": "zero"}},
        )
        out = str(tmp_path / "out")
        assert main(["solve", "--config", cfg, "--out", out]) == EXIT_OK
        last = sorted(n for n in os.listdir(out) if n.startswith("state_"))[-1]
        rows = read_csv_columns(tmp_path / "out" / last)
        assert np.all(rows[:, 1:] == 0.0)

    def test_overflow_exits_runtime(self, tmp_path, capsys):
        cfg = release_cfg(
            tmp_path,
            initial={"E": {"kind": "gaussian", "amplitude": 2e307,
                           "center": -1.5, "width": 0.3},
                     "u": {"kind": "zero"}, "sigma": {"kind": "zero"}},
        )
        out = str(tmp_path / "out")
        assert main(["solve", "--config", cfg, "--out", out]) == EXIT_RUNTIME
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["status"] == "overflow"

    def test_boundary_contamination_exits_4(self, tmp_path):
        # symmetric kernel on a domain so tight the field reaches the edge
        cfg = write_cfg(
            tmp_path,
            grid={"x_min": -1.0, "x_max": 1.0, "n": 401},
            mollifier={"kind": "symmetric"},
            scaling={"kind": "constant", "c": 0.1},
            model={"B0": 0.0, "T": 0.8},
            solver={"save_every": 8},
            initial={"E": {"kind": "gaussian", "amplitude": 1.0, "center": 0.0,
                           "width": 0.4},
                     "u": {"kind": "zero"}, "sigma": {"kind": "zero"}},
        )
        out = str(tmp_path / "out")
        assert main(["solve", "--config", cfg, "--out", out]) == EXIT_CONTAMINATED
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["boundary_contaminated"] is True


class TestSweep:
    def test_needs_psi_list(self, tmp_path, capsys):
        cfg = release_cfg(tmp_path, eps_schedule=[0.2, 0.1])
        assert main(["sweep", "--config", cfg]) == EXIT_CONFIG
        assert "psi" in capsys.readouterr().err

    def test_writes_table_and_verdicts(self, tmp_path):
        cfg = release_cfg(
            tmp_path,
            eps_schedule=[0.2, 0.1],
            experiment={"psi": [{"t0": 0.15, "x0": -0.5, "r_t": 0.1,
                                 "r_x": 0.3, "field": "Q"}]},
            initial={"E": {"kind": "zero"}, "u": {"kind": "zero"},
                     "sigma": {"kind": "zero"}},
        )
        out = str(tmp_path / "out")
        assert main(["sweep", "--config", cfg, "--out", out,
                     "--workers", "2"]) == EXIT_OK
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["partial"] is False
        verdict = next(iter(summary["verdicts"].values()))
        assert verdict == "converging"
        raw = (tmp_path / "out" / "sweep.csv").read_text()
        assert raw.startswith("eps,observable,pairing")


class TestSupportAndTrajectories:
    def test_check_support_confined(self, tmp_path):
        cfg = release_cfg(tmp_path)
        out = str(tmp_path / "out")
        assert main(["check-support", "--config", cfg, "--out", out]) == EXIT_OK
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["confined"] is True
        assert summary["worst_relative"] <= 1e-8

    def test_trajectories_need_starts(self, tmp_path, capsys):
        cfg = release_cfg(tmp_path)
        assert main(["trajectories", "--config", cfg]) == EXIT_CONFIG
        assert "trajectory_starts" in capsys.readouterr().err

    def test_trajectories_write_one_file_per_start(self, tmp_path):
        cfg = release_cfg(
            tmp_path,
            experiment={"trajectory_starts": [-0.05, -0.2]},
        )
        out = str(tmp_path / "out")
        assert main(["trajectories", "--config", cfg, "--out", out]) == EXIT_OK
        names = os.listdir(out)
        assert "trajectory_00.csv" in names and "trajectory_01.csv" in names
        rows = read_csv_columns(tmp_path / "out" / "trajectory_00.csv")
        assert rows.shape[1] == 2  # (r, w) samples along the path
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert all(t["max_speed"] < 1.0 for t in summary["trajectories"])


class TestScalingAndBlowup:
    def test_check_scaling_writes_growth_table(self, tmp_path):
        # the growth study never builds fields, but the config still has to
        # validate; zero data avoids the point-charge width dry check
        cfg = release_cfg(
            tmp_path, scaling={"kind": "loglog"}, eps=0.01,
            initial={"E": {"kind": "zero"}, "u": {"kind": "zero"},
                     "sigma": {"kind": "zero"}},
        )
        out = str(tmp_path / "out")
        assert main(["check-scaling", "--config", cfg, "--out", out]) == EXIT_OK
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["verdicts"]["1"]["satisfied"] is True
        assert summary["verdicts"]["2"]["satisfied"] is True
        raw = (tmp_path / "out" / "check_scaling.csv").read_text()
        assert raw.startswith("p,eps,h,growth_ratio")

    def test_probe_blowup_reports_exponent(self, tmp_path):
        cfg = release_cfg(tmp_path, eps_schedule=[0.2, 0.1, 0.05],
                          model={"B0": 0.0, "T": 0.15})
        out = str(tmp_path / "out")
        assert main(["probe-blowup", "--config", cfg, "--out", out]) == EXIT_OK
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["exponent"] > 0.0
        assert len(summary["peaks"]) == 3

    def test_compare_lin_writes_distances(self, tmp_path):
        cfg = release_cfg(tmp_path, model={"B0": 0.0, "T": 0.2})
        out = str(tmp_path / "out")
        assert main(["compare-lin", "--config", cfg, "--out", out]) == EXIT_OK
        rows = read_csv_columns(tmp_path / "out" / "compare_lin.csv")
        assert rows.shape[1] == 3  # t, l1_E, l1_u
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert "max_l1_E" in summary


def test_unknown_subcommand_fails_fast(capsys):
    with pytest.raises(SystemExit):
        main(["transmogrify"])
