"""Experiment configuration: JSON document parsing, emission, and hashing.

The document uses bench units (nJ, ps, fs, nm) matching how the instrument is
driven; everything is converted to SI on parse. Any subset of keys may be
given; missing keys take the defaults below, which describe the reference
switch: a 24 cm single-mode fiber pumped by 180 fs, 1030 nm pulses switching
1550 nm photons, with a 2 ps pump/signal walk-off across the fiber.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings

from .core import (
    DetectorConfig,
    ExperimentConfig,
    FiberSpec,
    MonteCarloConfig,
    PolarizationGeometry,
    PumpConfig,
    SignalConfig,
    SolverConfig,
    SourceConfig,
    SweepConfig,
    TimeGrid,
    TofConfig,
)
from .errors import ParseError, ValidationError

_NJ = 1e-9
_PS = 1e-12
_FS = 1e-15
_NM = 1e-9
_PS2_PER_KM = 1e-27
_PS3_PER_KM = 1e-39
_PS_PER_M = 1e-12
_UM2 = 1e-12
_PS_PER_NM = _PS / _NM

DEFAULT_DOCUMENT: dict = {
    "pump": {
        "wavelength_nm": 1030.0,
        "fwhm_fs": 180.0,
        "energy_nj": 8.0,
        "rep_rate_hz": 200e3,
    },
    "signal": {
        "wavelength_nm": 1550.0,
        "fwhm_fs": 600.0,
    },
    "fiber": {
        "length_m": 0.24,
        "beta2_pump_ps2_km": 24.0,
        "beta3_pump_ps3_km": 0.0,
        "beta2_signal_ps2_km": -25.0,
        "walkoff_ps_m": 8.333333333333334,
        "n2_m2_w": 2.6e-20,
        "a_eff_um2": 43.0,
        "alpha_per_m": 0.0,
    },
    "geometry": {
        "theta_rad": math.pi / 4.0,
    },
    "grid": {
        "n_samples": 16384,
        "window_ps": 40.0,
    },
    "source": {
        "mean_photon_number": 0.24,
        "max_photon_cutoff": 60,
    },
    "detectors": {
        "herald_efficiency": 0.5,
        "system_transmittance": 0.32,
        "noise_per_pulse_switched": 1e-5,
        "noise_per_pulse_unswitched": 1e-5,
        "coincidence_window_ps": 60.0,
        "noise_window_multiplier": 1.0,
    },
    "tof": {
        "dispersion_ps_nm": 1033.0,
        "reference_wavelength_nm": 1550.0,
        "jitter_fwhm_ps": 20.0,
    },
    "sweep": {
        "energies_nj": [0.5 * i for i in range(29)],
        "delays_ps": [round(-6.0 + 0.1 * i, 10) for i in range(121)],
    },
    "solver": {
        "steps": 256,
    },
    "monte_carlo": {
        "pulses_per_delay": 200_000,
    },
    "rng_seed": 12345,
}


def _merge(defaults, given, path, strict):
    """Overlay `given` on `defaults`, flagging keys the schema does not know."""
    if not isinstance(given, dict):
        raise ParseError(f"expected an object at '{path or '<root>'}'")
    merged = {}
    for key, default_value in defaults.items():
        if key in given and isinstance(default_value, dict):
            merged[key] = _merge(default_value, given[key], f"{path}{key}.", strict)
        elif key in given:
            merged[key] = given[key]
        else:
            merged[key] = default_value
    for key in given:
        if key not in defaults:
            message = f"unknown config key '{path}{key}'"
            if strict:
                raise ParseError(message)
            warnings.warn(message, stacklevel=3)
    return merged


def _number(doc, section, key, path=None):
    value = doc[section][key] if section else doc[key]
    label = path or (f"{section}.{key}" if section else key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"'{label}' must be a number")
    return float(value)


def _integer(doc, section, key):
    value = doc[section][key] if section else doc[key]
    label = f"{section}.{key}" if section else key
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"'{label}' must be an integer")
    return value


def _number_list(doc, section, key):
    value = doc[section][key]
    if not isinstance(value, list) or not value or any(
        isinstance(v, bool) or not isinstance(v, (int, float)) for v in value
    ):
        raise ParseError(f"'{section}.{key}' must be a non-empty list of numbers")
    return [float(v) for v in value]


def _build(doc: dict) -> ExperimentConfig:
    return ExperimentConfig(
        pump=PumpConfig(
            center_wavelength=_number(doc, "pump", "wavelength_nm") * _NM,
            fwhm_duration=_number(doc, "pump", "fwhm_fs") * _FS,
            energy=_number(doc, "pump", "energy_nj") * _NJ,
            repetition_rate=_number(doc, "pump", "rep_rate_hz"),
        ),
        signal=SignalConfig(
            center_wavelength=_number(doc, "signal", "wavelength_nm") * _NM,
            fwhm_duration=_number(doc, "signal", "fwhm_fs") * _FS,
        ),
        fiber=FiberSpec(
            length=_number(doc, "fiber", "length_m"),
            beta2_pump=_number(doc, "fiber", "beta2_pump_ps2_km") * _PS2_PER_KM,
            beta3_pump=_number(doc, "fiber", "beta3_pump_ps3_km") * _PS3_PER_KM,
            beta2_signal=_number(doc, "fiber", "beta2_signal_ps2_km") * _PS2_PER_KM,
            walkoff=_number(doc, "fiber", "walkoff_ps_m") * _PS_PER_M,
            n2=_number(doc, "fiber", "n2_m2_w"),
            a_eff=_number(doc, "fiber", "a_eff_um2") * _UM2,
            alpha=_number(doc, "fiber", "alpha_per_m"),
        ),
        geometry=PolarizationGeometry(theta=_number(doc, "geometry", "theta_rad")),
        grid=TimeGrid(
            n_samples=_integer(doc, "grid", "n_samples"),
            window=_number(doc, "grid", "window_ps") * _PS,
        ),
        source=SourceConfig(
            mean_photon_number=_number(doc, "source", "mean_photon_number"),
            max_photon_cutoff=_integer(doc, "source", "max_photon_cutoff"),
        ),
        detectors=DetectorConfig(
            herald_efficiency=_number(doc, "detectors", "herald_efficiency"),
            system_transmittance=_number(doc, "detectors", "system_transmittance"),
            noise_per_pulse_switched=_number(doc, "detectors", "noise_per_pulse_switched"),
            noise_per_pulse_unswitched=_number(doc, "detectors", "noise_per_pulse_unswitched"),
            coincidence_window=_number(doc, "detectors", "coincidence_window_ps") * _PS,
            noise_window_multiplier=_number(doc, "detectors", "noise_window_multiplier"),
        ),
        sweep=SweepConfig(
            energies=tuple(e * _NJ for e in _number_list(doc, "sweep", "energies_nj")),
            delays=tuple(d * _PS for d in _number_list(doc, "sweep", "delays_ps")),
        ),
        tof=TofConfig(
            dispersion=_number(doc, "tof", "dispersion_ps_nm") * _PS_PER_NM,
            reference_wavelength=_number(doc, "tof", "reference_wavelength_nm") * _NM,
            jitter_fwhm=_number(doc, "tof", "jitter_fwhm_ps") * _PS,
        ),
        solver=SolverConfig(steps=_integer(doc, "solver", "steps")),
        monte_carlo=MonteCarloConfig(
            pulses_per_delay=_integer(doc, "monte_carlo", "pulses_per_delay")
        ),
        rng_seed=_integer(doc, None, "rng_seed"),
    )


def parse_config(text: str, strict: bool = True) -> ExperimentConfig:
    """Parse a JSON config document; missing keys take defaults.

    An empty document yields the all-defaults config. Unknown keys raise
    ParseError in strict mode and warn otherwise.

    Raises:
        ParseError: malformed JSON, wrong value type, or unknown key (strict).
        ValidationError: a field violates its physical invariant.
    """
    if text.strip() == "":
        given: dict = {}
    else:
        try:
            given = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(given, dict):
        raise ParseError("config document must be a JSON object")
    doc = _merge(DEFAULT_DOCUMENT, given, "", strict)
    return _build(doc)


def default_config() -> ExperimentConfig:
    """The all-defaults experiment configuration."""
    return parse_config("")


def _inverse(value: float, factor: float) -> float:
    """Bench-unit value x such that x * factor reproduces `value` exactly.

    Plain division can land one ulp off after the forward conversion rounds;
    nudging by an ulp restores an exact parse/emit round trip.
    """
    x = value / factor
    if x * factor == value:
        return x
    for candidate in (math.nextafter(x, math.inf), math.nextafter(x, -math.inf)):
        if candidate * factor == value:
            return candidate
    return x


def emit_config(config: ExperimentConfig) -> str:
    """Serialize a config back to the JSON document schema (bench units)."""
    doc = {
        "pump": {
            "wavelength_nm": _inverse(config.pump.center_wavelength, _NM),
            "fwhm_fs": _inverse(config.pump.fwhm_duration, _FS),
            "energy_nj": _inverse(config.pump.energy, _NJ),
            "rep_rate_hz": config.pump.repetition_rate,
        },
        "signal": {
            "wavelength_nm": _inverse(config.signal.center_wavelength, _NM),
            "fwhm_fs": _inverse(config.signal.fwhm_duration, _FS),
        },
        "fiber": {
            "length_m": config.fiber.length,
            "beta2_pump_ps2_km": _inverse(config.fiber.beta2_pump, _PS2_PER_KM),
            "beta3_pump_ps3_km": _inverse(config.fiber.beta3_pump, _PS3_PER_KM),
            "beta2_signal_ps2_km": _inverse(config.fiber.beta2_signal, _PS2_PER_KM),
            "walkoff_ps_m": _inverse(config.fiber.walkoff, _PS_PER_M),
            "n2_m2_w": config.fiber.n2,
            "a_eff_um2": _inverse(config.fiber.a_eff, _UM2),
            "alpha_per_m": config.fiber.alpha,
        },
        "geometry": {"theta_rad": config.geometry.theta},
        "grid": {
            "n_samples": config.grid.n_samples,
            "window_ps": _inverse(config.grid.window, _PS),
        },
        "source": {
            "mean_photon_number": config.source.mean_photon_number,
            "max_photon_cutoff": config.source.max_photon_cutoff,
        },
        "detectors": {
            "herald_efficiency": config.detectors.herald_efficiency,
            "system_transmittance": config.detectors.system_transmittance,
            "noise_per_pulse_switched": config.detectors.noise_per_pulse_switched,
            "noise_per_pulse_unswitched": config.detectors.noise_per_pulse_unswitched,
            "coincidence_window_ps": _inverse(config.detectors.coincidence_window, _PS),
            "noise_window_multiplier": config.detectors.noise_window_multiplier,
        },
        "tof": {
            "dispersion_ps_nm": _inverse(config.tof.dispersion, _PS_PER_NM),
            "reference_wavelength_nm": _inverse(config.tof.reference_wavelength, _NM),
            "jitter_fwhm_ps": _inverse(config.tof.jitter_fwhm, _PS),
        },
        "sweep": {
            "energies_nj": [_inverse(e, _NJ) for e in config.sweep.energies],
            "delays_ps": [_inverse(d, _PS) for d in config.sweep.delays],
        },
        "solver": {"steps": config.solver.steps},
        "monte_carlo": {"pulses_per_delay": config.monte_carlo.pulses_per_delay},
        "rng_seed": config.rng_seed,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def config_hash(config: ExperimentConfig) -> str:
    """64-bit content hash of the canonical serialized config, as hex."""
    digest = hashlib.sha256(emit_config(config).encode("utf-8")).hexdigest()
    return digest[:16]
