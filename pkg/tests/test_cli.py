"""End-to-end checks of the command-line surface and its exit-code contract."""

import csv
import json

import pytest

from padia import cli
from padia.spectrum import BoundReport


def run_cli(args):
    return cli.main(args)


def read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


class TestSpectrumCommand:
    def test_gap_at_center(self, tmp_path):
        out = tmp_path / "spec.csv"
        assert run_cli(["spectrum", "--n", "100", "--m", "1", "--points", "11",
                        "--out", str(out)]) == 0
        rows = read_csv(out)
        assert len(rows) == 11
        center = next(r for r in rows if float(r["s"]) == 0.5)
        assert float(center["gap"]) == pytest.approx(0.1, abs=1e-15)

    def test_all_marked_constant_gap(self, tmp_path):
        out = tmp_path / "spec.csv"
        assert run_cli(["spectrum", "--n", "8", "--m", "8", "--points", "3",
                        "--out", str(out)]) == 0
        assert all(float(r["gap"]) == 1.0 for r in read_csv(out))

    def test_json_output(self, capsys):
        assert run_cli(["spectrum", "--n", "4", "--m", "1", "--points", "5",
                        "--output", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["records"]) == 5
        assert payload["records"][0]["e0"] == pytest.approx(0.0, abs=1e-12)

    def test_points_validation(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["spectrum", "--n", "4", "--m", "1", "--points", "1"])
        assert exc.value.code == 2

    def test_invalid_instance_is_usage_error(self, capsys):
        assert run_cli(["spectrum", "--n", "4", "--m", "9"]) == 2
        assert "error" in capsys.readouterr().err


class TestBoundsCommand:
    def test_default_rule_passes(self, tmp_path):
        out = tmp_path / "bounds.csv"
        assert run_cli(["bounds", "--n-list", "4,16,64,256", "--m-rule", "one",
                        "--out", str(out)]) == 0
        rows = read_csv(out)
        assert [int(r["n"]) for r in rows] == [4, 16, 64, 256]
        assert all(r["bounds_hold"] == "true" for r in rows)

    def test_all_divisors_includes_fully_marked(self, tmp_path):
        out = tmp_path / "bounds.csv"
        assert run_cli(["bounds", "--n-list", "16", "--m-rule", "all-divisors",
                        "--out", str(out)]) == 0
        rows = read_csv(out)
        assert [int(r["m"]) for r in rows] == [1, 2, 4, 8, 16]
        fully_marked = rows[-1]
        assert float(fully_marked["p_one_round"]) == 1.0

    def test_violation_exit_code(self, monkeypatch, tmp_path, capsys):
        broken = BoundReport(
            ov_psi_at_s_minus=0.0, ov_beta_at_s_plus=0.0, p_one_round=0.0,
            window_factor=2.0, alpha_weight=9.0, beta_weight=9.0, end_ratio=9.0,
            all_bounds_hold=False, failures=("window_factor < 1",),
        )
        monkeypatch.setattr(cli, "bound_report", lambda inst: broken)
        out = tmp_path / "bounds.csv"
        assert run_cli(["bounds", "--n-list", "4", "--m-rule", "one",
                        "--out", str(out)]) == 1
        assert "violation" in capsys.readouterr().err

    def test_bad_rule(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["bounds", "--n-list", "4", "--m-rule", "mystery"])
        assert exc.value.code == 2


class TestEvolveCommand:
    def test_all_marked_round(self, capsys):
        assert run_cli(["evolve", "--n", "64", "--m", "64", "--c", "1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["success_probability"] == pytest.approx(1.0, abs=1e-12)

    def test_repeat_is_deterministic(self, capsys):
        args = ["evolve", "--n", "16", "--m", "1", "--c", "2", "--repeat",
                "--seed", "7", "--max-rounds", "1000"]
        assert run_cli(args) == 0
        first = capsys.readouterr().out
        assert run_cli(args) == 0
        second = capsys.readouterr().out
        assert first == second
        assert json.loads(first)["repeat"]["rounds_used"] >= 1

    def test_norm_drift_exit_code(self, capsys):
        assert run_cli(["evolve", "--n", "64", "--m", "1", "--c", "64",
                        "--steps", "10"]) == 1
        assert "norm drifted" in capsys.readouterr().err

    def test_rejects_bad_numeric_flag(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["evolve", "--n", "abc", "--m", "1"])
        assert exc.value.code == 2


class TestSweepCommand:
    def test_n_axis_json(self, capsys):
        assert run_cli(["sweep", "--axis", "n", "--fixed", "1",
                        "--grid", "64,128,256,512,1024", "--output", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["records"]) == 5
        assert 0.45 <= payload["fit"]["slope"] <= 0.55

    def test_csv_fit_goes_to_stderr(self, capsys):
        assert run_cli(["sweep", "--axis", "m", "--fixed", "4096",
                        "--grid", "1,2,4,8,16"]) == 0
        captured = capsys.readouterr()
        assert captured.out.splitlines()[0].startswith("n,m,schedule,")
        assert "fit" in captured.err

    def test_grid_validation(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["sweep", "--axis", "n", "--fixed", "1", "--grid", "64,128"])
        assert exc.value.code == 2

    def test_workers_env_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("PADIA_WORKERS", "2")
        assert run_cli(["sweep", "--axis", "n", "--fixed", "1",
                        "--grid", "64,128,256,512,1024", "--output", "json"]) == 0
        json.loads(capsys.readouterr().out)


class TestCertifyCommand:
    def test_small_range_passes(self, capsys):
        assert run_cli(["certify", "--n-max", "8"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out
        assert "worst" in out

    def test_cap_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["certify", "--n-max", "2048"])
        assert exc.value.code == 2


class TestParser:
    def test_missing_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            run_cli([])
        assert exc.value.code == 2

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["teleport"])
        assert exc.value.code == 2
