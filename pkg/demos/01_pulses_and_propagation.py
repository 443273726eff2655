"""Pulses in, pulses out: the split-step propagator on familiar textbook cases.

Walks through the three effects the switch is built from, each against its
closed form: group-velocity dispersion broadening a Gaussian, self-phase
modulation writing a nonlinear phase, and walk-off sliding the pump across
the signal's time axis.
"""

import math

import numpy as np

import kerrswitch as ks

grid = ks.TimeGrid(n_samples=16384, window=40e-12)
signal = ks.make_gaussian_pulse(grid, 1550e-9, 600e-15, 1e-18)

# --- 1. Dispersion only: FWHM grows as sqrt(1 + (L/L_D)^2) ------------------
fwhm0 = 200e-15
t_width = fwhm0 / (2.0 * math.sqrt(math.log(2.0)))
beta2 = 19e-27
dispersion_length = t_width**2 / beta2
fiber = ks.FiberSpec(length=dispersion_length, beta2_pump=beta2, beta3_pump=0.0,
                     beta2_signal=0.0, walkoff=0.0, n2=0.0, a_eff=4.3e-11)
pump = ks.make_gaussian_pulse(grid, 1030e-9, fwhm0, 1e-9)
out = ks.propagate(pump, signal, fiber, steps=64)
measured = ks.full_width(grid.times, np.abs(out.pump_out.samples) ** 2, 0.5)
print(f"dispersion: one L_D broadens {fwhm0*1e15:.0f} fs -> {measured*1e15:.1f} fs "
      f"(closed form {fwhm0*math.sqrt(2)*1e15:.1f} fs)")

# --- 2. SPM only: peak phase gamma*P0*L, spectrum broadens ------------------
fiber = ks.FiberSpec(length=0.24, beta2_pump=0.0, beta3_pump=0.0,
                     beta2_signal=0.0, walkoff=0.0, n2=2.6e-20, a_eff=4.3e-11)
gamma = ks.nonlinear_coefficient(fiber.n2, 1030e-9, fiber.a_eff)
pump = ks.make_gaussian_pulse(grid, 1030e-9, 180e-15, 2e-9)
out = ks.propagate(pump, signal, fiber, steps=128)
p0 = np.abs(pump.samples).max() ** 2
wl_in, dens_in = ks.pump_spectrum(pump)
wl_out, dens_out = ks.pump_spectrum(out.pump_out)
print(f"spm: predicted peak phase {gamma*p0*fiber.length:.2f} rad; spectral FWHM "
      f"{ks.full_width(wl_in, dens_in, 0.5):.2f} nm -> {ks.full_width(wl_out, dens_out, 0.5):.2f} nm")

# --- 3. Walk-off: the pump slides by walkoff * L in the signal frame --------
fiber = ks.FiberSpec(length=0.24, beta2_pump=0.0, beta3_pump=0.0, beta2_signal=0.0,
                     walkoff=8.333e-12, n2=0.0, a_eff=4.3e-11)
pump = ks.make_gaussian_pulse(grid, 1030e-9, 180e-15, 1e-9)
out = ks.propagate(pump, signal, fiber, delay=fiber.walkoff * fiber.length / 2, steps=64)
corr = np.correlate(np.abs(out.pump_out.samples) ** 2, np.abs(pump.samples) ** 2, mode="full")
lag = (np.argmax(corr) - (grid.n_samples - 1)) * grid.dt
print(f"walk-off: pump displaced by {lag*1e12:.2f} ps "
      f"(walkoff * L = {fiber.walkoff*fiber.length*1e12:.2f} ps)")

# Energy is conserved through all of it (lossless fiber).
print(f"energy drift through the nonlinear run: "
      f"{abs(ks.energy(out.pump_out)/ks.energy(pump) - 1.0):.2e}")
