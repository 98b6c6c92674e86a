import math

import pytest

from wgqed import AtomConfig, ModeIndex, WaveguideGeometry, cutoff_frequency, group_velocity
from wgqed.core import channel_rate


@pytest.fixture
def geom():
    """Standard cross section with a = 2b, the configuration used throughout."""
    return WaveguideGeometry(a=2.0)


def midband(geom, lower=(1, 1), upper=(3, 1)):
    return 0.5 * (
        cutoff_frequency(geom, ModeIndex(*lower)) + cutoff_frequency(geom, ModeIndex(*upper))
    )


def centered_atom(geom, omega_a, z0, rate=1.0, lowest=(1, 1)):
    """Atom at the cross-section center with the lowest-channel rate pinned to ``rate``."""
    probe = AtomConfig(
        omega_a=omega_a, dipole_scale=1.0, x0=geom.a / 2, y0=geom.b / 2, z0=z0
    )
    kappa = rate / channel_rate(geom, probe, ModeIndex(*lowest))
    return AtomConfig(
        omega_a=omega_a, dipole_scale=kappa, x0=geom.a / 2, y0=geom.b / 2, z0=z0
    )


def atom_with_delay(geom, omega_a, rate, gamma_tau1, lowest=(1, 1)):
    """Centered atom whose lowest channel has the given rate and delay-rate product."""
    v = group_velocity(geom, ModeIndex(*lowest), omega_a)
    z0 = 0.5 * v * gamma_tau1 / rate
    return centered_atom(geom, omega_a, z0, rate=rate, lowest=lowest)


def phase_pinned_atom(geom, omega_a, gamma_tau1, phase, lowest=(1, 1)):
    """Centered atom hitting (phase mod 2pi, gamma*tau1) for the lowest channel."""
    from wgqed import wavenumber_at

    k0 = wavenumber_at(geom, ModeIndex(*lowest), omega_a)
    winding = 0
    while phase + 2 * math.pi * winding <= 0:
        winding += 1
    z0 = (phase + 2 * math.pi * winding) / (2 * k0)
    v = group_velocity(geom, ModeIndex(*lowest), omega_a)
    tau1 = 2 * z0 / v
    return centered_atom(geom, omega_a, z0, rate=gamma_tau1 / tau1, lowest=lowest)
