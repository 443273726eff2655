"""Command runners and the CLI surface: artifacts, manifests, exit codes, and
byte determinism."""

import csv
import json
import os

import numpy as np
import pytest

import kerrswitch as ks
from kerrswitch.cli import main

SMALL_DOC = {
    "grid": {"n_samples": 4096, "window_ps": 40.0},
    "solver": {"steps": 64},
    "sweep": {
        "energies_nj": [0.0, 2.0, 4.0, 6.0, 8.0, 10.0],
        "delays_ps": [round(-4.0 + 0.25 * i, 10) for i in range(33)],
    },
    "monte_carlo": {"pulses_per_delay": 5000},
    "source": {"mean_photon_number": 3.86, "max_photon_cutoff": 60},
    "detectors": {"herald_efficiency": 1.0, "system_transmittance": 1.0},
}


@pytest.fixture(scope="module")
def small_cfg():
    return ks.parse_config(json.dumps(SMALL_DOC))


def read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


class TestCmdSweep:
    def test_artifacts_and_manifest(self, small_cfg, tmp_path):
        manifest = ks.cmd_sweep(small_cfg, tmp_path)
        names = {e.name for e in manifest.outputs}
        assert names == {"surface.csv", "slices.csv", "metrics.json"}
        for entry in manifest.outputs:
            assert os.path.getsize(entry.path) == entry.bytes > 0
        assert manifest.config_hash == ks.config_hash(small_cfg)
        assert (tmp_path / "manifest.json").exists()

        rows = read_csv(tmp_path / "surface.csv")
        assert rows[0][0] == "delay_ps\\energy_nJ"
        assert len(rows[0]) == 1 + len(small_cfg.sweep.energies)
        assert len(rows) == 1 + len(small_cfg.sweep.delays)
        # final row newline-terminated
        raw = (tmp_path / "surface.csv").read_bytes()
        assert raw.endswith(b"\n")

    def test_surface_values_match_direct_evaluation(self, small_cfg, tmp_path):
        ks.cmd_sweep(small_cfg, tmp_path)
        rows = read_csv(tmp_path / "surface.csv")
        surface = ks.sweep_surface(small_cfg)
        got = float(rows[17][3])  # delay index 16, energy index 2
        assert got == pytest.approx(surface.eta_grid[2, 16], rel=1e-12)

    def test_metrics_present(self, small_cfg, tmp_path):
        ks.cmd_sweep(small_cfg, tmp_path)
        metrics = json.loads((tmp_path / "metrics.json").read_text())
        assert metrics["eta_max"] > 0.9
        assert metrics["calibrated_energy_nj"] == pytest.approx(8.0, rel=0.25)
        assert metrics["fw10db_ps"] > 1.0
        assert metrics["flat98_span_fs"] is not None

    def test_single_cell_marks_insufficient_samples(self, tmp_path):
        doc = dict(SMALL_DOC)
        doc["sweep"] = {"energies_nj": [8.0], "delays_ps": [0.0]}
        cfg = ks.parse_config(json.dumps(doc))
        ks.cmd_sweep(cfg, tmp_path)
        rows = read_csv(tmp_path / "surface.csv")
        assert len(rows) == 2 and len(rows[1]) == 2
        metrics = json.loads((tmp_path / "metrics.json").read_text())
        assert metrics["eta_max"] is None
        assert "insufficient samples" in metrics["note"]

    def test_rerun_is_byte_identical(self, small_cfg, tmp_path):
        ks.cmd_sweep(small_cfg, tmp_path / "a")
        ks.cmd_sweep(small_cfg, tmp_path / "b", workers=2)
        for name in ("surface.csv", "slices.csv", "metrics.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_cmd_sweep_default_config_metrics(default_cfg, calibrated_energy, tmp_path):
    """The stock configuration reproduces the headline operating figures."""
    ks.cmd_sweep(default_cfg, tmp_path)
    metrics = json.loads((tmp_path / "metrics.json").read_text())
    assert metrics["eta_max"] >= 0.99
    assert abs(metrics["fw10db_ps"] - 2.3) <= 0.7
    assert abs(metrics["flat98_span_fs"] - 533.0) <= 250.0
    assert metrics["calibrated_energy_nj"] == pytest.approx(calibrated_energy / 1e-9, rel=1e-6)


class TestCmdFock:
    def test_artifacts(self, small_cfg, tmp_path):
        manifest = ks.cmd_fock(small_cfg, tmp_path, n_max=2)
        assert {e.name for e in manifest.outputs} == {"fock_probs.csv", "fock_probs.json"}
        rows = read_csv(tmp_path / "fock_probs.csv")
        assert rows[0] == ["delay_ps", "N", "n_S", "n_U", "probability", "stderr", "kind"]
        kinds = {r[6] for r in rows[1:]}
        assert kinds == {"exact", "monte_carlo"}

    def test_exact_curves_sum_to_one(self, small_cfg, tmp_path):
        ks.cmd_fock(small_cfg, tmp_path, n_max=1)
        rows = [r for r in read_csv(tmp_path / "fock_probs.csv")[1:] if r[6] == "exact"]
        by_delay = {}
        for r in rows:
            by_delay.setdefault(r[0], 0.0)
            by_delay[r[0]] += float(r[4])
        assert all(abs(total - 1.0) <= 1e-12 for total in by_delay.values())

    def test_fwhm_narrows_with_n(self, small_cfg, tmp_path):
        ks.cmd_fock(small_cfg, tmp_path, n_max=4)
        data = json.loads((tmp_path / "fock_probs.json").read_text())
        delays = np.array(data["delays_ps"])
        widths = []
        for n in range(1, 5):
            curve = next(
                np.array(c["probability"])
                for c in data["curves"]
                if c["kind"] == "exact" and c["N"] == n and c["n_S"] == n
            )
            widths.append(ks.full_width(delays, curve, 0.5))
        assert all(w1 > w2 for w1, w2 in zip(widths, widths[1:]))

    def test_bad_n_max(self, small_cfg, tmp_path):
        with pytest.raises(ks.errors.ValidationError):
            ks.cmd_fock(small_cfg, tmp_path, n_max=11)

    def test_rerun_and_workers_byte_identical(self, small_cfg, tmp_path):
        ks.cmd_fock(small_cfg, tmp_path / "a", n_max=2, workers=1)
        ks.cmd_fock(small_cfg, tmp_path / "b", n_max=2, workers=2)
        assert (tmp_path / "a" / "fock_probs.csv").read_bytes() == (
            tmp_path / "b" / "fock_probs.csv"
        ).read_bytes()


class TestCmdSpectrum:
    def test_artifacts_and_monotone_fwhm(self, small_cfg, tmp_path):
        manifest = ks.cmd_spectrum(small_cfg, tmp_path)
        assert {e.name for e in manifest.outputs} == {
            "pump_spectra.csv",
            "spectrum_metrics.csv",
            "signal_tof.csv",
        }
        rows = read_csv(tmp_path / "spectrum_metrics.csv")[1:]
        fwhms = [float(r[1]) for r in rows]
        assert all(a <= b + 1e-12 for a, b in zip(fwhms, fwhms[1:]))

    def test_zero_energy_row_is_transform_limited(self, small_cfg, tmp_path):
        ks.cmd_spectrum(small_cfg, tmp_path)
        rows = read_csv(tmp_path / "spectrum_metrics.csv")[1:]
        zero_fwhm = float(rows[0][1])
        pump = ks.make_gaussian_pulse(
            small_cfg.grid,
            small_cfg.pump.center_wavelength,
            small_cfg.pump.fwhm_duration,
            1e-9,
        )
        wl, dens = ks.pump_spectrum(pump)
        assert zero_fwhm == pytest.approx(ks.full_width(wl, dens, 0.5), rel=1e-9)

    def test_tof_ports_agree(self, small_cfg, tmp_path):
        ks.cmd_spectrum(small_cfg, tmp_path)
        rows = read_csv(tmp_path / "signal_tof.csv")[1:]
        switched = np.array([float(r[2]) for r in rows if r[0] == "switched"])
        unswitched = np.array([float(r[2]) for r in rows if r[0] == "unswitched"])
        times = np.array([float(r[1]) for r in rows if r[0] == "switched"])
        tv = 0.5 * np.abs(switched - unswitched).sum() * (times[1] - times[0])
        assert tv < 1e-3


class TestCmdCalibrate:
    def test_writes_calibration(self, small_cfg, tmp_path):
        ks.cmd_calibrate(small_cfg, tmp_path)
        data = json.loads((tmp_path / "calibration.json").read_text())
        assert data["calibrated_energy_nj"] == pytest.approx(8.0, rel=0.25)
        assert data["eta_at_calibrated_energy"] > 0.9


class TestCliMain:
    def write_config(self, tmp_path, doc=SMALL_DOC):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(doc))
        return str(path)

    def test_validate_config_ok(self, tmp_path, capsys):
        code = main(["validate-config", "--config", self.write_config(tmp_path)])
        assert code == 0
        assert "config OK" in capsys.readouterr().out

    def test_validate_config_defaults(self, capsys):
        assert main(["validate-config"]) == 0

    def test_config_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"pump": {"energy_nj": -2.0}}))
        code = main(["validate-config", "--config", str(path)])
        assert code == 2
        assert "config error" in capsys.readouterr().err

    def test_unknown_key_needs_strict_flag(self, tmp_path, capsys):
        path = tmp_path / "odd.json"
        path.write_text(json.dumps({"pump": {"fwmh_fs": 200.0}}))
        with pytest.warns(UserWarning):
            assert main(["validate-config", "--config", str(path)]) == 0
        assert main(["validate-config", "--config", str(path), "--strict"]) == 2

    def test_sweep_command_end_to_end(self, tmp_path, capsys):
        cfg_path = self.write_config(tmp_path)
        out = tmp_path / "out"
        code = main(["sweep", "--config", cfg_path, "--out", str(out), "--workers", "1"])
        assert code == 0
        assert (out / "surface.csv").exists()
        assert "manifest" in capsys.readouterr().out

    def test_non_convergence_exit_code(self, tmp_path, capsys):
        doc = dict(SMALL_DOC)
        doc["solver"] = {"steps": 8}
        doc["grid"] = {"n_samples": 16384, "window_ps": 40.0}
        cfg_path = self.write_config(tmp_path, doc)
        code = main(["sweep", "--config", cfg_path, "--out", str(tmp_path / "nc")])
        assert code == 3
        assert "simulation error" in capsys.readouterr().err

    def test_io_error_exit_code(self, tmp_path, capsys):
        cfg_path = self.write_config(tmp_path)
        blocker = tmp_path / "blocked"
        blocker.write_text("a file, not a directory")
        code = main(["calibrate", "--config", cfg_path, "--out", str(blocker)])
        assert code == 4

    def test_seed_flag_changes_monte_carlo(self, tmp_path):
        cfg_path = self.write_config(tmp_path)
        base = ["fock", "--config", cfg_path, "--n-max", "1", "--workers", "1"]
        assert main(base + ["--out", str(tmp_path / "s1"), "--seed", "1"]) == 0
        assert main(base + ["--out", str(tmp_path / "s2"), "--seed", "2"]) == 0
        assert main(base + ["--out", str(tmp_path / "s1b"), "--seed", "1"]) == 0
        a = (tmp_path / "s1" / "fock_probs.csv").read_bytes()
        b = (tmp_path / "s2" / "fock_probs.csv").read_bytes()
        c = (tmp_path / "s1b" / "fock_probs.csv").read_bytes()
        assert a != b
        assert a == c

    def test_env_var_default_out_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("KERRSWITCH_OUT", str(tmp_path / "envout"))
        monkeypatch.chdir(tmp_path)
        cfg_path = self.write_config(tmp_path)
        assert main(["calibrate", "--config", cfg_path]) == 0
        assert (tmp_path / "envout" / "calibration.json").exists()
