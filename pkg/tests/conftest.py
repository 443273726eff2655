"""Shared fixtures: the default experiment and its calibrated operating point.

Session-scoped because calibration runs the propagator a few dozen times; the
kernel cache makes every later lookup at the same energies free.
"""

import pytest

import kerrswitch as ks


@pytest.fixture(scope="session")
def default_cfg():
    return ks.default_config()


@pytest.fixture(scope="session")
def calibrated_energy(default_cfg):
    return ks.calibrate_pi_energy(default_cfg)
