"""Sweep orchestration and result serialization: the commands behind the CLI.

Every command writes its artifacts into an output directory plus a
manifest.json describing the run. CSV files use RFC-style quoting, '.'
decimals, a mandatory header row, and a newline-terminated final row; numbers
are formatted with %.12g so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config_io import config_hash, emit_config
from .core import ExperimentConfig, make_gaussian_pulse
from .errors import EmptySpan, NoBracket, NoCrossing, ValidationError
from .photons import binomial_split, monte_carlo_experiment
from .propagation import clip_spectrum_support, propagate, pump_spectrum
from .switch import (
    calibrate_pi_energy,
    check_convergence,
    efficiency_vs_delay,
    full_width,
    flat_top_span,
    numeric_efficiency,
    pump_output_spectrum,
    sweep_surface,
    temporal_resolution,
)
from .tof import TofSpec, spectrum_to_histogram

_PS = 1e-12
_FS = 1e-15
_NJ = 1e-9


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    path: str
    rows: int
    bytes: int


@dataclass(frozen=True)
class RunManifest:
    config_hash: str
    tool_version: str
    started_at: str
    finished_at: str
    outputs: tuple[ManifestEntry, ...]


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".12g")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


class _Run:
    """Collects output files for one command and finalizes the manifest."""

    def __init__(self, config: ExperimentConfig, out_dir):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.config = config
        self.started = _now()
        self.entries: list[ManifestEntry] = []

    def write_csv(self, name: str, header: list[str], rows) -> Path:
        path = self.out_dir / name
        count = 0
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
                count += 1
        self._record(name, path, count)
        return path

    def write_json(self, name: str, payload) -> Path:
        path = self.out_dir / name
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        path.write_text(text)
        self._record(name, path, len(text.splitlines()))
        return path

    def _record(self, name: str, path: Path, rows: int):
        size = path.stat().st_size
        if size == 0:
            raise OSError(f"output {path} is empty")
        self.entries.append(ManifestEntry(name=name, path=str(path), rows=rows, bytes=size))

    def finish(self) -> RunManifest:
        manifest = RunManifest(
            config_hash=config_hash(self.config),
            tool_version=__version__,
            started_at=self.started,
            finished_at=_now(),
            outputs=tuple(self.entries),
        )
        payload = {
            "config_hash": manifest.config_hash,
            "tool_version": manifest.tool_version,
            "started_at": manifest.started_at,
            "finished_at": manifest.finished_at,
            "outputs": [
                {"name": e.name, "path": e.path, "rows": e.rows, "bytes": e.bytes}
                for e in manifest.outputs
            ],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        (self.out_dir / "manifest.json").write_text(text)
        (self.out_dir / "config.json").write_text(emit_config(self.config))
        return manifest


def cmd_sweep(config: ExperimentConfig, out_dir, workers: int = 1) -> RunManifest:
    """Efficiency surface over the configured grid, plus slices and metrics.

    Writes surface.csv (rows are delays, columns are pump energies),
    slices.csv (the zero-delay energy slice and the calibrated-energy delay
    slice), metrics.json, and manifest.json.

    Raises:
        NonConvergence: if the step-doubling residual at the operating point
            exceeds 1e-3.
    """
    run = _Run(config, out_dir)
    check_convergence(config, config.pump.energy, 0.0)

    surface = sweep_surface(config, workers=workers)
    energies = surface.energies
    delays = surface.delays
    header = ["delay_ps\\energy_nJ"] + [_fmt(e / _NJ) for e in energies]
    run.write_csv(
        "surface.csv",
        header,
        (
            [_fmt(delays[j] / _PS)] + [_fmt(surface.eta_grid[i, j]) for i in range(energies.size)]
            for j in range(delays.size)
        ),
    )

    metrics: dict = {
        "eta_max": None,
        "fw10db_ps": None,
        "flat98_span_fs": None,
        "calibrated_energy_nj": None,
        "note": "",
    }
    sufficient = delays.size >= 16 and energies.size >= 3
    e_star = config.pump.energy
    if sufficient:
        try:
            e_star = calibrate_pi_energy(config)
            metrics["calibrated_energy_nj"] = e_star / _NJ
        except NoBracket as exc:
            metrics["note"] = f"calibration failed: {exc}"
    else:
        metrics["note"] = "insufficient samples"

    # Energy slice at zero delay; reuse the surface column when it exists.
    zero_idx = np.flatnonzero(delays == 0.0)
    if zero_idx.size:
        energy_slice = surface.eta_grid[:, zero_idx[0]]
    else:
        energy_slice = np.array(
            [numeric_efficiency(config, float(e), 0.0).eta for e in energies]
        )
    delay_slice = efficiency_vs_delay(config, e_star, delays)

    rows = [
        ["energy_at_zero_delay", 0.0, e / _NJ, eta]
        for e, eta in zip(energies, energy_slice)
    ] + [
        ["delay_at_calibrated_energy", d / _PS, e_star / _NJ, eta]
        for d, eta in zip(delays, delay_slice)
    ]
    run.write_csv("slices.csv", ["slice", "delay_ps", "energy_nJ", "eta"], rows)

    if sufficient:
        metrics["eta_max"] = float(delay_slice.max())
        try:
            metrics["fw10db_ps"] = temporal_resolution(delays, delay_slice) / _PS
        except (NoCrossing, ValidationError) as exc:
            metrics["note"] += f" fw10db unavailable: {exc}"
        try:
            metrics["flat98_span_fs"] = flat_top_span(delays, delay_slice, 0.98) / _FS
        except (EmptySpan, ValidationError) as exc:
            metrics["note"] += f" flat98 unavailable: {exc}"
    metrics["note"] = metrics["note"].strip()
    run.write_json("metrics.json", metrics)
    return run.finish()


def cmd_fock(config: ExperimentConfig, out_dir, n_max: int = 6, workers: int = 1) -> RunManifest:
    """Exact and Monte Carlo port-split curves for heralded N-photon states.

    Writes fock_probs.csv (exact rows carry stderr 0; Monte Carlo rows carry
    binomial standard errors), fock_probs.json, and manifest.json.
    """
    if not (1 <= n_max <= 10):
        raise ValidationError("n_max must lie in 1..10")
    run = _Run(config, out_dir)
    delays = np.asarray(config.sweep.delays, dtype=float)
    etas = efficiency_vs_delay(config, config.pump.energy, delays)

    mc = monte_carlo_experiment(
        config,
        lambda tau: float(np.interp(tau, delays, etas)),
        pulses=config.monte_carlo.pulses_per_delay,
        seed=config.rng_seed,
        n_max=n_max,
        workers=workers,
    )

    rows = []
    records = []
    for n in range(1, n_max + 1):
        exact = [binomial_split(n, float(e)) for e in etas]
        for k in range(n + 1):
            curve = [dist.probs[k] for dist in exact]
            records.append(
                {
                    "kind": "exact",
                    "N": n,
                    "n_S": k,
                    "n_U": n - k,
                    "probability": curve,
                    "stderr": [0.0] * delays.size,
                }
            )
            for j in range(delays.size):
                rows.append([delays[j] / _PS, n, k, n - k, curve[j], 0.0, "exact"])
        mc_probs = []
        mc_err = []
        for j in range(delays.size):
            p, err, _total = mc.empirical_split(n, j)
            mc_probs.append(p)
            mc_err.append(err)
        for k in range(n + 1):
            records.append(
                {
                    "kind": "monte_carlo",
                    "N": n,
                    "n_S": k,
                    "n_U": n - k,
                    "probability": [float(mc_probs[j][k]) for j in range(delays.size)],
                    "stderr": [float(mc_err[j][k]) for j in range(delays.size)],
                }
            )
            for j in range(delays.size):
                rows.append(
                    [delays[j] / _PS, n, k, n - k, mc_probs[j][k], mc_err[j][k], "monte_carlo"]
                )

    run.write_csv(
        "fock_probs.csv",
        ["delay_ps", "N", "n_S", "n_U", "probability", "stderr", "kind"],
        rows,
    )
    run.write_json(
        "fock_probs.json",
        {"delays_ps": [d / _PS for d in delays], "curves": records},
    )
    return run.finish()


def cmd_spectrum(config: ExperimentConfig, out_dir) -> RunManifest:
    """Pump output spectra over the energy ladder and signal TOF histograms.

    Writes pump_spectra.csv, spectrum_metrics.csv (spectral FWHM per rung),
    signal_tof.csv (switched versus unswitched arrival-time histograms), and
    manifest.json.
    """
    run = _Run(config, out_dir)
    energies = np.asarray(config.sweep.energies, dtype=float)

    spectra_rows = []
    metric_rows = []
    for e in energies:
        wl, density = pump_output_spectrum(config, float(e))
        wl_c, density_c = clip_spectrum_support(wl, density)
        spectra_rows.extend(
            [e / _NJ, wl_c[i], density_c[i]] for i in range(wl_c.size)
        )
        metric_rows.append([e / _NJ, full_width(wl, density, 0.5)])
    run.write_csv("pump_spectra.csv", ["energy_nJ", "wavelength_nm", "density_per_nm"], spectra_rows)
    run.write_csv("spectrum_metrics.csv", ["energy_nJ", "fwhm_nm"], metric_rows)

    # Switched port: signal co-propagated with the pump at the operating
    # energy. Unswitched reference: pump blocked. XPM imprints phase between
    # the polarization components, not amplitude on the scalar envelope, so
    # the two histograms agree to numerical precision.
    tof = TofSpec(
        dispersion=config.tof.dispersion,
        reference_wavelength=config.tof.reference_wavelength,
        jitter_fwhm=config.tof.jitter_fwhm,
    )
    signal_in = make_gaussian_pulse(
        config.grid,
        config.signal.center_wavelength,
        config.signal.fwhm_duration,
        1.0e-18,
    )
    tof_rows = []
    for port, pump_energy in (("switched", config.pump.energy), ("unswitched", 0.0)):
        pump_in = make_gaussian_pulse(
            config.grid,
            config.pump.center_wavelength,
            config.pump.fwhm_duration,
            pump_energy,
        )
        result = propagate(pump_in, signal_in, config.fiber, 0.0, config.solver.steps)
        wl_nm, density = clip_spectrum_support(*pump_spectrum(result.signal_out))
        span = abs(tof.dispersion) * (wl_nm[-1] - wl_nm[0]) * 1e-9
        centers, hist = spectrum_to_histogram(
            tof, wl_nm * 1e-9, density * 1e9, bin_width=span / 1024.0
        )
        tof_rows.extend(
            [port, centers[i] / _PS, hist[i] * _PS] for i in range(centers.size)
        )
    run.write_csv("signal_tof.csv", ["port", "time_ps", "density_per_ps"], tof_rows)
    return run.finish()


def cmd_calibrate(config: ExperimentConfig, out_dir) -> RunManifest:
    """Find the pump energy that maximizes the zero-delay efficiency."""
    run = _Run(config, out_dir)
    e_star = calibrate_pi_energy(config)
    eta = numeric_efficiency(config, e_star, 0.0).eta
    run.write_json(
        "calibration.json",
        {
            "calibrated_energy_nj": e_star / _NJ,
            "eta_at_calibrated_energy": eta,
            "delay_ps": 0.0,
        },
    )
    return run.finish()
