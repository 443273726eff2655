"""Switching efficiencies: the closed-form path, the simulation-driven path,
pump-energy calibration, delay sweeps, and temporal-resolution metrics."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .core import ExperimentConfig, PulseEnvelope, make_gaussian_pulse
from .errors import EmptySpan, NoBracket, NoCrossing, NonConvergence, ValidationError
from .propagation import (
    XpmKernel,
    compute_xpm_kernel,
    propagate_signal_linear,
    pump_spectrum,
    sample_xpm_phase,
)


def analytic_efficiency(theta: float, delta_phi: float) -> float:
    """Closed-form switching efficiency sin^2(2*theta) * sin^2(delta_phi/2)."""
    return math.sin(2.0 * theta) ** 2 * math.sin(0.5 * delta_phi) ** 2


def nonlinear_phase(n2: float, l_eff: float, intensity: float, lambda_signal: float) -> float:
    """Differential Kerr phase 8*pi*n2*l_eff*intensity / (3*lambda_signal)."""
    return 8.0 * math.pi * n2 * l_eff * intensity / (3.0 * lambda_signal)


@dataclass(frozen=True)
class SwitchResult:
    """Efficiency and diagnostics for one (pump energy, delay) point."""

    eta: float
    delay: float
    pump_energy: float
    xpm_phase: np.ndarray = field(repr=False)
    pump_spectrum_out: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)


@dataclass(frozen=True)
class SweepSurface:
    """Efficiency over an (energy, delay) grid; eta_grid[i, j] = eta(E_i, tau_j)."""

    energies: np.ndarray = field(repr=False)
    delays: np.ndarray = field(repr=False)
    eta_grid: np.ndarray = field(repr=False)


def _make_pump(config: ExperimentConfig, pump_energy: float) -> PulseEnvelope:
    return make_gaussian_pulse(
        config.grid,
        config.pump.center_wavelength,
        config.pump.fwhm_duration,
        pump_energy,
    )


def _make_signal(config: ExperimentConfig) -> PulseEnvelope:
    return make_gaussian_pulse(
        config.grid,
        config.signal.center_wavelength,
        config.signal.fwhm_duration,
        1.0e-18,  # weak probe; only the normalized shape enters the efficiency
    )


@lru_cache(maxsize=64)
def _cached_kernel(config: ExperimentConfig, pump_energy: float, steps: int) -> XpmKernel:
    pump = _make_pump(config, pump_energy)
    return compute_xpm_kernel(pump, config.fiber, steps, config.signal.center_wavelength)


@lru_cache(maxsize=16)
def _cached_signal_weights(config: ExperimentConfig) -> np.ndarray:
    out = propagate_signal_linear(_make_signal(config), config.fiber)
    return np.abs(out.samples) ** 2


def efficiency_from_phase(
    signal_weights: np.ndarray, xpm_phase: np.ndarray, theta: float
) -> float:
    """Wavepacket-weighted switching efficiency for a phase profile.

    Each temporal slice of the signal undergoes its own polarization rotation;
    the port split is the intensity-weighted average of the pointwise
    closed-form efficiency.
    """
    total = signal_weights.sum()
    rotated = float(np.dot(signal_weights, np.sin(0.5 * xpm_phase) ** 2) / total)
    return math.sin(2.0 * theta) ** 2 * rotated


def numeric_efficiency(
    config: ExperimentConfig,
    pump_energy: float,
    delay: float,
    steps: int | None = None,
    include_pump_spectrum: bool = False,
) -> SwitchResult:
    """Simulation-driven switching efficiency at one (energy, delay) point."""
    if pump_energy < 0.0:
        raise ValidationError("pump_energy must be non-negative")
    steps = config.solver.steps if steps is None else steps
    weights = _cached_signal_weights(config)
    if pump_energy == 0.0:
        phase = np.zeros(config.grid.n_samples)
        spectrum = None
    else:
        kernel = _cached_kernel(config, pump_energy, steps)
        phase = sample_xpm_phase(kernel, config.grid, delay)
        spectrum = pump_spectrum(kernel.pump_final) if include_pump_spectrum else None
    eta = efficiency_from_phase(weights, phase, config.geometry.theta)
    return SwitchResult(
        eta=eta,
        delay=delay,
        pump_energy=pump_energy,
        xpm_phase=phase,
        pump_spectrum_out=spectrum,
    )


def efficiency_vs_delay(
    config: ExperimentConfig,
    pump_energy: float,
    delays: np.ndarray,
    steps: int | None = None,
) -> np.ndarray:
    """Efficiency along a delay axis at fixed pump energy (one propagation)."""
    steps = config.solver.steps if steps is None else steps
    weights = _cached_signal_weights(config)
    delays = np.asarray(delays, dtype=float)
    if pump_energy == 0.0:
        return np.zeros(delays.shape)
    kernel = _cached_kernel(config, pump_energy, steps)
    out = np.empty(delays.shape)
    for j, tau in enumerate(delays):
        phase = sample_xpm_phase(kernel, config.grid, float(tau))
        out[j] = efficiency_from_phase(weights, phase, config.geometry.theta)
    return out


def _sweep_row(config: ExperimentConfig, pump_energy: float, steps: int | None):
    return efficiency_vs_delay(
        config, pump_energy, np.asarray(config.sweep.delays), steps=steps
    )


def _sweep_row_star(args) -> np.ndarray:
    return _sweep_row(*args)


def sweep_surface(
    config: ExperimentConfig, workers: int = 1, steps: int | None = None
) -> SweepSurface:
    """Efficiency over the configured (energy, delay) grid.

    Rows (fixed energy) are independent, so they may be fanned out to a
    process pool; each row is computed by the identical serial code path and
    rows are assembled in axis order, making the result bitwise independent of
    the worker count.
    """
    energies = np.asarray(config.sweep.energies, dtype=float)
    delays = np.asarray(config.sweep.delays, dtype=float)
    args = [(config, float(e), steps) for e in energies]
    if workers <= 1 or len(energies) == 1:
        rows = [_sweep_row_star(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row_star, args))
    return SweepSurface(energies=energies, delays=delays, eta_grid=np.vstack(rows))


def calibrate_pi_energy(config: ExperimentConfig, steps: int | None = None) -> float:
    """Pump energy maximizing the zero-delay efficiency.

    Scans the configured sweep energy range, then refines the best bracket
    with a bounded scalar search. Deterministic for a fixed config.

    Raises:
        NoBracket: if the efficiency never exceeds 0.5 on the scanned range.
    """
    energies = np.asarray(config.sweep.energies, dtype=float)
    lo, hi = float(energies.min()), float(energies.max())
    if hi <= lo:
        raise NoBracket("sweep energy range is degenerate")
    if energies.size >= 17:
        coarse = np.sort(energies)
    else:
        coarse = np.linspace(lo, hi, 17)
    etas = np.array([numeric_efficiency(config, float(e), 0.0, steps).eta for e in coarse])
    best = int(np.argmax(etas))
    if etas[best] <= 0.5:
        raise NoBracket(
            f"efficiency peaks at {etas[best]:.3g} <= 0.5 on [{lo:g}, {hi:g}] J"
        )
    left = coarse[max(best - 1, 0)]
    right = coarse[min(best + 1, len(coarse) - 1)]
    if left == right:
        return float(coarse[best])
    res = minimize_scalar(
        lambda e: -numeric_efficiency(config, float(e), 0.0, steps).eta,
        bounds=(left, right),
        method="bounded",
        options={"xatol": 1e-3 * max(coarse[best], hi * 1e-3)},
    )
    return float(res.x)


def pump_output_spectrum(
    config: ExperimentConfig, pump_energy: float, steps: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Normalized pump spectrum after the fiber at the given launch energy.

    A zero launch energy returns the transform-limited input spectrum: the
    normalized spectral shape is the zero-power limit of the propagated one.
    """
    steps = config.solver.steps if steps is None else steps
    if pump_energy == 0.0:
        return pump_spectrum(_make_pump(config, 1e-12))
    kernel = _cached_kernel(config, pump_energy, steps)
    return pump_spectrum(kernel.pump_final)


def convergence_residual(
    config: ExperimentConfig, pump_energy: float, delay: float = 0.0, steps: int | None = None
) -> float:
    """Step-doubling efficiency residual |eta(steps) - eta(2*steps)|."""
    steps = config.solver.steps if steps is None else steps
    eta1 = numeric_efficiency(config, pump_energy, delay, steps).eta
    eta2 = numeric_efficiency(config, pump_energy, delay, 2 * steps).eta
    return abs(eta1 - eta2)


def check_convergence(
    config: ExperimentConfig, pump_energy: float, delay: float = 0.0, tol: float = 1e-3
) -> float:
    """Raise NonConvergence if the step-doubling residual exceeds `tol`."""
    residual = convergence_residual(config, pump_energy, delay)
    if residual > tol:
        raise NonConvergence(
            f"step-doubling residual {residual:.3g} exceeds {tol:g} "
            f"at E={pump_energy:g} J, delay={delay:g} s"
        )
    return residual


def _interp_crossing(x0, y0, x1, y1, level):
    if y1 == y0:
        return x0
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def full_width(x: np.ndarray, y: np.ndarray, fraction: float) -> float:
    """Width between the outermost crossings of max(y) * fraction.

    Interpolates linearly in y (not in dB) between samples.

    Raises:
        NoCrossing: if the curve never drops below the level on one side.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 16:
        raise ValidationError("need at least 16 samples to measure a width")
    if not (0.0 < fraction < 1.0):
        raise ValidationError("fraction must lie in (0, 1)")
    peak = int(np.argmax(y))
    if y[peak] <= 0.0:
        raise ValidationError("curve maximum must be positive")
    level = y[peak] * fraction

    # Segments [i, i+1] on which the curve crosses the level.
    crossings = np.flatnonzero((y[:-1] < level) != (y[1:] < level))
    left_cross = crossings[crossings < peak]
    right_cross = crossings[crossings >= peak]
    if left_cross.size == 0 or right_cross.size == 0:
        raise NoCrossing(f"curve never drops below {level:.3g} on one side of the peak")
    li = int(left_cross.min())
    ri = int(right_cross.max())
    left = _interp_crossing(x[li], y[li], x[li + 1], y[li + 1], level)
    right = _interp_crossing(x[ri], y[ri], x[ri + 1], y[ri + 1], level)
    return float(right - left)


def temporal_resolution(
    delays: np.ndarray, etas: np.ndarray, threshold_db: float = 10.0
) -> float:
    """Full width of a delay response at `threshold_db` below its maximum."""
    return full_width(delays, etas, 10.0 ** (-threshold_db / 10.0))


def flat_top_span(delays: np.ndarray, etas: np.ndarray, level: float) -> float:
    """Width of the contiguous region around the maximum where eta >= level.

    Raises:
        EmptySpan: if the maximum itself lies below `level`.
    """
    delays = np.asarray(delays, dtype=float)
    etas = np.asarray(etas, dtype=float)
    if delays.size < 16:
        raise ValidationError("need at least 16 samples to measure a span")
    peak = int(np.argmax(etas))
    if etas[peak] < level:
        raise EmptySpan(f"maximum {etas[peak]:.4g} lies below the requested level {level:g}")

    li = peak
    while li > 0 and etas[li - 1] >= level:
        li -= 1
    ri = peak
    while ri < etas.size - 1 and etas[ri + 1] >= level:
        ri += 1
    left = delays[li]
    if li > 0:
        left = _interp_crossing(delays[li - 1], etas[li - 1], delays[li], etas[li], level)
    right = delays[ri]
    if ri < etas.size - 1:
        right = _interp_crossing(delays[ri], etas[ri], delays[ri + 1], etas[ri + 1], level)
    return float(right - left)
