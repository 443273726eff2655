"""Photon-number statistics of the heralded source, loss, port splitting,
noise, and Monte Carlo emulation of the counting experiment."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import ExperimentConfig
from .errors import CutoffTooSmall, NoCoincidences, ValidationError, ZeroNoise

_MC_BLOCK = 1 << 17  # pulses per RNG block; fixed so results ignore worker count


@dataclass(frozen=True)
class JointPhotonDistribution:
    """Joint idler/signal photon-number probabilities P(n_i, n_s)."""

    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.ndim != 2:
            raise ValidationError("joint distribution must be a 2-D matrix")
        if np.any(p < 0.0):
            raise ValidationError("probabilities must be non-negative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValidationError("joint distribution must sum to 1 within 1e-12")

    @property
    def cutoff(self) -> int:
        return self.probs.shape[0] - 1

    def mean_idler(self) -> float:
        n = np.arange(self.probs.shape[0])
        return float(n @ self.probs.sum(axis=1))

    def mean_signal(self) -> float:
        n = np.arange(self.probs.shape[1])
        return float(self.probs.sum(axis=0) @ n)


@dataclass(frozen=True)
class SplitDistribution:
    """Port-split probabilities for a heralded N-photon state.

    probs[k] = P(n_S = k, n_U = N - k) for k = 0..N.
    """

    herald: int
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.shape != (self.herald + 1,):
            raise ValidationError("split distribution must have herald+1 entries")
        if np.any(p < 0.0):
            raise ValidationError("probabilities must be non-negative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValidationError("split distribution must sum to 1 within 1e-12")

    def mean_switched(self) -> float:
        return float(np.arange(self.herald + 1) @ self.probs)


@dataclass(frozen=True)
class CountRecord:
    """Raw coincidence bookkeeping for one delay point."""

    n_si: int
    n_ui: int
    pulses: int
    noise_s: int
    noise_u: int

    def __post_init__(self):
        for name in ("n_si", "n_ui", "pulses", "noise_s", "noise_u"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative")


@dataclass(frozen=True)
class EtaEstimate:
    value: float
    stderr: float
    coincidences: int


def thermal_joint_source(mean_n: float, cutoff: int) -> JointPhotonDistribution:
    """Perfectly correlated two-mode squeezed-vacuum photon statistics.

    P(n, n) = mean_n^n / (1 + mean_n)^(n+1), zero off the diagonal,
    renormalized over the cutoff. Emits CutoffTooSmall if the truncated mass
    reaches 1e-6; picking a safe cutoff is the caller's job.
    """
    if mean_n < 0.0:
        raise ValidationError("mean_n must be non-negative")
    if cutoff < 1:
        raise ValidationError("cutoff must be >= 1")
    n = np.arange(cutoff + 1)
    if mean_n == 0.0:
        diag = np.zeros(cutoff + 1)
        diag[0] = 1.0
    else:
        ratio = mean_n / (1.0 + mean_n)
        diag = ratio**n / (1.0 + mean_n)
    truncated = 1.0 - diag.sum()
    if truncated >= 1e-6:
        warnings.warn(
            f"cutoff {cutoff} truncates {truncated:.3g} of the photon-number mass",
            CutoffTooSmall,
            stacklevel=2,
        )
    probs = np.zeros((cutoff + 1, cutoff + 1))
    np.fill_diagonal(probs, diag / diag.sum())
    return JointPhotonDistribution(probs=probs)


def _thinning_matrix(size: int, transmittance: float) -> np.ndarray:
    """T[n, k] = P(k of n photons survive a Bernoulli(t) channel)."""
    t = transmittance
    out = np.zeros((size, size))
    out[0, 0] = 1.0
    for n in range(1, size):
        # Pascal-style recurrence keeps the rows exactly normalized.
        out[n, 0] = out[n - 1, 0] * (1.0 - t)
        out[n, 1:] = out[n - 1, 1:] * (1.0 - t) + out[n - 1, :-1] * t
    return out


def apply_loss(
    dist: JointPhotonDistribution, t_idler: float, t_signal: float
) -> JointPhotonDistribution:
    """Independent Bernoulli thinning of the idler and signal arms."""
    for name, t in (("t_idler", t_idler), ("t_signal", t_signal)):
        if not (0.0 <= t <= 1.0):
            raise ValidationError(f"{name} must lie in [0, 1]")
    size = dist.probs.shape[0]
    ti = _thinning_matrix(size, t_idler)
    ts = _thinning_matrix(size, t_signal)
    probs = ti.T @ dist.probs @ ts
    return JointPhotonDistribution(probs=probs / probs.sum())


def binomial_split(n_photons: int, eta: float) -> SplitDistribution:
    """Variable-beamsplitter output probabilities for an N-photon input.

    probs[k] = C(N, k) * eta^k * (1 - eta)^(N - k).
    """
    if n_photons < 0:
        raise ValidationError("photon number must be non-negative")
    if not (0.0 <= eta <= 1.0):
        raise ValidationError("eta must lie in [0, 1]")
    k = np.arange(n_photons + 1)
    coeff = np.array([math.comb(n_photons, int(i)) for i in k], dtype=float)
    probs = coeff * eta**k * (1.0 - eta) ** (n_photons - k)
    return SplitDistribution(herald=n_photons, probs=probs / probs.sum())


def split_vs_delay(config: ExperimentConfig, n_photons: int) -> list[SplitDistribution]:
    """Exact split distributions along the configured delay axis.

    The switching efficiency is simulated once per delay at the configured
    pump energy and shared across all photon numbers up to `n_photons`.
    """
    from .switch import efficiency_vs_delay

    if n_photons < 1:
        raise ValidationError("n_photons must be >= 1")
    delays = np.asarray(config.sweep.delays, dtype=float)
    etas = efficiency_vs_delay(config, config.pump.energy, delays)
    return [binomial_split(n_photons, float(e)) for e in etas]


def eta_exp(counts: CountRecord) -> EtaEstimate:
    """Coincidence-ratio estimate of the switching efficiency.

    value = N_Si / (N_Si + N_Ui), with the binomial standard error
    sqrt(eta*(1-eta)/(N_Si+N_Ui)).
    """
    total = counts.n_si + counts.n_ui
    if total == 0:
        raise NoCoincidences("no coincidences recorded in either port")
    value = counts.n_si / total
    stderr = math.sqrt(value * (1.0 - value) / total)
    return EtaEstimate(value=value, stderr=stderr, coincidences=total)


def snr(heralded_prob: float, noise_per_pulse: float) -> float:
    """Signal-to-noise ratio: heralded detection probability per noise count."""
    if not (0.0 <= heralded_prob <= 1.0):
        raise ValidationError("heralded_prob must lie in [0, 1]")
    if noise_per_pulse < 0.0:
        raise ValidationError("noise_per_pulse must be non-negative")
    if noise_per_pulse == 0.0:
        raise ZeroNoise("noise-limited SNR undefined for zero noise per pulse")
    return heralded_prob / noise_per_pulse


def sample_pair_counts(mean_n: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw photon-pair numbers from the thermal source distribution."""
    if mean_n == 0.0:
        return np.zeros(size, dtype=np.int64)
    return rng.geometric(1.0 / (1.0 + mean_n), size=size) - 1


@dataclass(frozen=True)
class MonteCarloResult:
    """Counting-experiment emulation over the configured delay axis.

    split_events[N] is an integer matrix [n_delays, N+1]; entry [d, k] counts
    pulses at delay d heralded by N idler photons in which exactly k of N
    detected signal photons exited the switched port.
    """

    delays: np.ndarray = field(repr=False)
    records: tuple[CountRecord, ...]
    split_events: dict[int, np.ndarray] = field(repr=False)

    def empirical_split(self, n_photons: int, delay_index: int):
        """(probabilities, standard errors, total events) for one (N, delay)."""
        events = self.split_events[n_photons][delay_index]
        total = int(events.sum())
        if total == 0:
            size = n_photons + 1
            return np.zeros(size), np.zeros(size), 0
        p = events / total
        stderr = np.sqrt(p * (1.0 - p) / total)
        return p, stderr, total


def _mc_block(config: ExperimentConfig, eta: float, delay_index: int,
              block_index: int, size: int, seed: int, n_max: int):
    """One fixed-size block of pulses on its own counter-based RNG stream."""
    rng = np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(delay_index, block_index)))
    )
    det = config.detectors
    pairs = sample_pair_counts(config.source.mean_photon_number, size, rng)
    heralds = rng.binomial(pairs, det.herald_efficiency)
    survivors = rng.binomial(pairs, det.system_transmittance)
    switched = rng.binomial(survivors, eta)
    mult = det.noise_window_multiplier
    noise_s = rng.poisson(det.noise_per_pulse_switched * mult, size)
    noise_u = rng.poisson(det.noise_per_pulse_unswitched * mult, size)
    s_tot = switched + noise_s
    u_tot = (survivors - switched) + noise_u

    # One-photon coincidence filter: a single herald and a single detection
    # across both signal ports, mirroring the tight correlation-window cut.
    one = heralds == 1
    n_si = int(np.count_nonzero(one & (s_tot == 1) & (u_tot == 0)))
    n_ui = int(np.count_nonzero(one & (u_tot == 1) & (s_tot == 0)))

    split = {}
    for n in range(1, n_max + 1):
        mask = (heralds == n) & (s_tot + u_tot == n)
        split[n] = np.bincount(s_tot[mask], minlength=n + 1).astype(np.int64)
    return n_si, n_ui, int(noise_s.sum()), int(noise_u.sum()), split


def _mc_block_star(args):
    return _mc_block(*args)


def monte_carlo_experiment(
    config: ExperimentConfig,
    eta_of_delay,
    pulses: int,
    seed: int,
    n_max: int = 6,
    workers: int = 1,
) -> MonteCarloResult:
    """Emulate the photon-counting experiment pulse by pulse.

    Per pulse: draw a pair number from the thermal source, thin each arm by
    its transmittance, route every surviving signal photon independently with
    probability eta(delay), and add Poisson noise counts per detection window.
    Pulses are partitioned into fixed-size blocks, each on a counter-based
    stream derived from (seed, delay index, block index), so the merged result
    is bit-identical for any worker count.
    """
    if pulses < 1:
        raise ValidationError("pulses must be >= 1")
    delays = np.asarray(config.sweep.delays, dtype=float)
    etas = [float(eta_of_delay(float(tau))) for tau in delays]

    tasks = []
    for d, eta in enumerate(etas):
        remaining = pulses
        block = 0
        while remaining > 0:
            size = min(_MC_BLOCK, remaining)
            tasks.append((config, eta, d, block, size, seed, n_max))
            remaining -= size
            block += 1

    if workers <= 1 or len(tasks) == 1:
        outputs = [_mc_block_star(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_mc_block_star, tasks))

    n_si = np.zeros(delays.size, dtype=np.int64)
    n_ui = np.zeros(delays.size, dtype=np.int64)
    noise_s = np.zeros(delays.size, dtype=np.int64)
    noise_u = np.zeros(delays.size, dtype=np.int64)
    split_events = {n: np.zeros((delays.size, n + 1), dtype=np.int64) for n in range(1, n_max + 1)}
    for (_, _, d, *_rest), out in zip(tasks, outputs):
        n_si[d] += out[0]
        n_ui[d] += out[1]
        noise_s[d] += out[2]
        noise_u[d] += out[3]
        for n, counts in out[4].items():
            split_events[n][d] += counts

    records = tuple(
        CountRecord(
            n_si=int(n_si[d]),
            n_ui=int(n_ui[d]),
            pulses=pulses,
            noise_s=int(noise_s[d]),
            noise_u=int(noise_u[d]),
        )
        for d in range(delays.size)
    )
    return MonteCarloResult(delays=delays, records=records, split_events=split_events)
