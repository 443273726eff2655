"""Time-of-flight spectrometry of the switched photons.

A dispersion-compensating module (1033 ps/nm) maps the signal spectrum onto
arrival times; detector jitter smears the histogram. The demo shows the
wavelength-to-time mapping, then checks that running the switch leaves the
signal's arrival-time histogram unchanged: the Kerr interaction rotates
polarization but does not reshape the wavepacket's spectral density.
"""

import numpy as np

import kerrswitch as ks

cfg = ks.default_config()
tof = ks.TofSpec(dispersion=cfg.tof.dispersion,
                 reference_wavelength=cfg.tof.reference_wavelength,
                 jitter_fwhm=cfg.tof.jitter_fwhm)

print("wavelength offset -> arrival time through the 1033 ps/nm module:")
for dl_nm in (-2.0, -0.5, 0.0, 0.5, 1.0, 2.0):
    t = ks.arrival_time(tof, cfg.tof.reference_wavelength + dl_nm * 1e-9)
    print(f"  {dl_nm:+5.1f} nm -> {t*1e12:+8.1f} ps")

signal = ks.make_gaussian_pulse(cfg.grid, cfg.signal.center_wavelength,
                                cfg.signal.fwhm_duration, 1e-18)
histograms = {}
for label, e in (("switch on", cfg.pump.energy), ("switch off", 0.0)):
    pump = ks.make_gaussian_pulse(cfg.grid, cfg.pump.center_wavelength,
                                  cfg.pump.fwhm_duration, e)
    res = ks.propagate(pump, signal, cfg.fiber, 0.0, cfg.solver.steps)
    wl_nm, dens = ks.clip_spectrum_support(*ks.pump_spectrum(res.signal_out))
    span = abs(tof.dispersion) * (wl_nm[-1] - wl_nm[0]) * 1e-9
    centers, hist = ks.spectrum_to_histogram(tof, wl_nm * 1e-9, dens * 1e9, span / 512)
    histograms[label] = (centers, hist)
    width = ks.full_width(centers, hist, 0.5)
    print(f"\n{label}: histogram FWHM {width*1e12:.0f} ps over "
          f"{centers.size} bins")

(c_on, h_on), (_, h_off) = histograms["switch on"], histograms["switch off"]
tv = 0.5 * np.abs(h_on - h_off).sum() * (c_on[1] - c_on[0])
print(f"\ntotal-variation distance, switch on vs off: {tv:.2e}")
print("the switch is spectrally transparent at this level")

with open("demo-out-signal-tof.csv", "w") as handle:
    handle.write(ks.histogram_csv(c_on, h_on))
print("wrote demo-out-signal-tof.csv")
