import csv
import json
import subprocess
import sys

import numpy as np
import pytest

CLI = [sys.executable, "-m", "klts.cli"]


def run_cli(*args, **kwargs):
    return subprocess.run([*CLI, *args], capture_output=True, text=True, **kwargs)


class TestVerifyCommand:
    def test_default_run_passes(self, tmp_path):
        out = tmp_path / "report.json"
        res = run_cli("verify", "--seed", "42", "--json", str(out))
        assert res.returncode == 0, res.stdout + res.stderr
        report = json.loads(out.read_text())
        assert report["overall_pass"] is True
        assert report["seed"] == 42
        assert report["records"]
        for rec in report["records"]:
            assert {"name", "group", "identity", "samples", "max_error",
                    "tolerance", "pass"} <= set(rec)
        assert "PASS  overall" in res.stdout

    def test_determinism_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run_cli("verify", "--seed", "42", "--json", str(a)).returncode == 0
        assert run_cli("verify", "--seed", "42", "--json", str(b)).returncode == 0
        assert a.read_bytes() == b.read_bytes()

    def test_tightened_tolerance_fails_controlled(self, tmp_path):
        cfg = tmp_path / "tight.json"
        cfg.write_text(json.dumps({"tolerance_overrides": {"identity_abs": 1e-16,
                                                           "spin_abs": 1e-18}}))
        out = tmp_path / "report.json"
        res = run_cli("verify", "--config", str(cfg), "--seed", "42", "--json", str(out))
        assert res.returncode == 1
        report = json.loads(out.read_text())
        assert report["overall_pass"] is False
        failing = [r for r in report["records"] if not r["pass"]]
        assert failing
        for rec in failing:
            assert rec["max_error"] > rec["tolerance"]

    def test_malformed_config_exit_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        res = run_cli("verify", "--config", str(bad))
        assert res.returncode == 2
        assert "error" in res.stderr

    def test_unknown_config_key_exit_2(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"sede": 42}))
        res = run_cli("verify", "--config", str(cfg))
        assert res.returncode == 2

    def test_unknown_tolerance_key_exit_2(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"tolerance_overrides": {"identityabs": 1e-16}}))
        res = run_cli("verify", "--config", str(cfg))
        assert res.returncode == 2
        assert "tolerance" in res.stderr

    def test_thread_cap_keeps_report_identical(self, tmp_path):
        import os
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        env1 = dict(os.environ, KLTS_THREADS="1")
        env4 = dict(os.environ, KLTS_THREADS="4")
        assert subprocess.run([*CLI, "verify", "--seed", "7", "--json", str(a)],
                              env=env1, capture_output=True).returncode == 0
        assert subprocess.run([*CLI, "verify", "--seed", "7", "--json", str(b)],
                              env=env4, capture_output=True).returncode == 0
        assert a.read_bytes() == b.read_bytes()


class TestScenarioCommand:
    def test_zero_stress_scenario(self, tmp_path):
        res = run_cli("scenario", "run", "thermal-expansion-zero-stress",
                      "--out", str(tmp_path))
        assert res.returncode == 0
        summary = json.loads((tmp_path / "thermal_expansion_zero_stress.json").read_text())
        assert summary["pass"] is True
        assert summary["max_error"] <= 1e-12
        rows = list(csv.DictReader(open(tmp_path / "thermal_expansion_zero_stress.csv")))
        assert len(rows) == 20
        assert all(float(r["volume_stress_rel"]) <= 1e-12 for r in rows)

    def test_sphere_curvature_scenario(self, tmp_path):
        res = run_cli("scenario", "run", "sphere-curvature", "--out", str(tmp_path))
        assert res.returncode == 0
        rows = list(csv.DictReader(open(tmp_path / "sphere_curvature.csv")))
        for row in rows:
            radius = float(row["radius"])
            assert abs(float(row["abs_mean_curvature"]) - 1.0 / radius) <= 1e-8
            assert abs(float(row["gauss_curvature"]) - 1.0 / radius ** 2) <= 1e-8

    def test_plate_bending_scenario(self, tmp_path):
        res = run_cli("scenario", "run", "plate-bending-moment", "--out", str(tmp_path))
        assert res.returncode == 0
        rows = list(csv.DictReader(open(tmp_path / "plate_bending_moment.csv")))
        # c3 = 0.5 default: M11 = 2 * 0.5 * kappa = kappa
        for row in rows:
            assert float(row["moment_11"]) == pytest.approx(float(row["kappa_11"]), abs=1e-14)

    def test_entropy_scenario(self, tmp_path):
        res = run_cli("scenario", "run", "heated-patch-entropy", "--out", str(tmp_path))
        assert res.returncode == 0
        summary = json.loads((tmp_path / "heated_patch_entropy.json").read_text())
        assert summary["min_gamma_con"] >= -1e-15
        assert summary["spot_value"] == pytest.approx(1.0 / 90000.0)

    def test_hencky_scenario(self, tmp_path):
        res = run_cli("scenario", "run", "hencky-additivity", "--out", str(tmp_path))
        assert res.returncode == 0
        summary = json.loads((tmp_path / "hencky_additivity.json").read_text())
        assert summary["max_log_defect"] <= 1e-10
        assert summary["max_composition_defect"] <= 1e-12

    def test_unknown_scenario_exit_2(self, tmp_path):
        res = run_cli("scenario", "run", "does-not-exist", "--out", str(tmp_path))
        assert res.returncode == 2

    def test_scenario_csv_deterministic(self, tmp_path):
        d1, d2 = tmp_path / "one", tmp_path / "two"
        run_cli("scenario", "run", "hencky-additivity", "--out", str(d1))
        run_cli("scenario", "run", "hencky-additivity", "--out", str(d2))
        assert (d1 / "hencky_additivity.csv").read_bytes() \
            == (d2 / "hencky_additivity.csv").read_bytes()


class TestTableCommand:
    def test_identity_state_columns(self, tmp_path):
        out = tmp_path / "table.csv"
        res = run_cli("table", "--out", str(out))
        assert res.returncode == 0
        rows = list(csv.DictReader(open(out)))
        assert float(rows[0]["dJ_dC_11"]) == 0.5
        assert float(rows[0]["dJ_dC_12"]) == 0.0
        assert float(rows[0]["dJ_dC_22"]) == 0.5
        assert rows[0]["dkappa_db_11"] == ""  # flat spot: no curvature inverse

    def test_stress_curve_crosses_zero_at_compatibility(self, tmp_path):
        out = tmp_path / "table.csv"
        run_cli("table", "--out", str(out))
        rows = list(csv.DictReader(open(out)))
        temps = np.array([float(r["temperature"]) for r in rows])
        norms = np.array([float(r["S_norm"]) for r in rows])
        assert temps[np.argmin(norms)] == pytest.approx(340.0)  # default t_star
        assert norms.min() <= 1e-6 * norms.max()

    def test_byte_identical_regeneration(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 11, "sweep": {"random_state": True}}))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("table", "--config", str(cfg), "--out", str(a))
        run_cli("table", "--config", str(cfg), "--out", str(b))
        assert a.read_bytes() == b.read_bytes()
