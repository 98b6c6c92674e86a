import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import sici

from wgqed import (
    AtCutoffSingularity,
    AtomConfig,
    ModeIndex,
    QuadratureFailure,
    coupling_spectrum,
    coupling_strength,
    cutoff_frequency,
    density_of_states,
    enumerate_channels,
    finite_time_rate,
    golden_rule_rate,
    limiting_amplitude,
    modulation_spectrum,
    perturbative_amplitude,
    resonant_wavelength,
    sample_coupling_spectrum,
    wavenumber_at,
)

from conftest import centered_atom, midband

IDX11 = ModeIndex(1, 1)


def window_integral_oracle(t, omega_a, half_width=2000.0):
    """Independent check of the unit area of the observation window.

    Finite quadrature of the window function plus the analytic tail
    int_U^inf sin^2(u)/u^2 du = 1/(2U) - cos(2U)/(2U) + (pi/2 - Si(2U)).
    """
    span = 2.0 * half_width / t
    val = quad(
        lambda w: modulation_spectrum(t, w, omega_a),
        omega_a - span,
        omega_a + span,
        limit=2000,
    )[0]
    si, _ = sici(2.0 * half_width)
    tail = (
        1.0 / (2 * half_width)
        - math.cos(2 * half_width) / (2 * half_width)
        + (math.pi / 2 - si)
    )
    return val + 2.0 * tail / math.pi


class TestCouplingSpectrum:
    def test_zero_below_lowest_cutoff(self, geom):
        atom = centered_atom(geom, midband(geom), z0=0.2)
        assert coupling_spectrum(geom, atom, 0.5 * cutoff_frequency(geom, IDX11)) == 0.0

    def test_single_channel_window_matches_channel_term(self, geom):
        omega = midband(geom)
        atom = centered_atom(geom, omega, z0=0.2)
        g = coupling_strength(geom, atom, IDX11, omega)
        rho = density_of_states(geom, IDX11, omega)
        assert coupling_spectrum(geom, atom, omega) == pytest.approx(
            2.0 * g * g * rho, rel=1e-14
        )

    def test_quarter_wavelength_kills_lowest_channel(self, geom):
        omega = midband(geom)
        lam = resonant_wavelength(geom, centered_atom(geom, omega, z0=0.0))
        suppressed = centered_atom(geom, omega, z0=lam / 4)
        reference = centered_atom(geom, omega, z0=0.0)
        ratio = coupling_spectrum(geom, suppressed, omega) / coupling_spectrum(
            geom, reference, omega
        )
        assert ratio < 1e-12

    def test_exact_cutoff_raises(self, geom):
        atom = centered_atom(geom, midband(geom), z0=0.2)
        with pytest.raises(AtCutoffSingularity):
            coupling_spectrum(geom, atom, cutoff_frequency(geom, IDX11))

    def test_divergence_toward_cutoff(self, geom):
        atom = centered_atom(geom, midband(geom), z0=0.0)
        cut = cutoff_frequency(geom, IDX11)
        near = coupling_spectrum(geom, atom, cut * (1 + 1e-10))
        mid = coupling_spectrum(geom, atom, midband(geom))
        assert near > 1e3 * mid

    def test_sampled_grid(self, geom):
        atom = centered_atom(geom, midband(geom), z0=0.2)
        omegas = np.linspace(1.0, 5.0, 9)
        spectrum = sample_coupling_spectrum(geom, atom, omegas)
        assert (spectrum.values >= 0).all()
        below = omegas < cutoff_frequency(geom, IDX11)
        assert (spectrum.values[below] == 0).all()


class TestGoldenRule:
    def test_mirror_plane_doubles_rate(self, geom):
        atom = centered_atom(geom, midband(geom), z0=0.0, rate=1.0)
        est = golden_rule_rate(geom, atom)
        assert est.rate == pytest.approx(4.0, rel=1e-12)
        assert est.frequency_shift == pytest.approx(0.0, abs=1e-12)

    def test_opposition_phase_suppresses(self, geom):
        omega = midband(geom)
        lam = resonant_wavelength(geom, centered_atom(geom, omega, z0=0.0))
        atom = centered_atom(geom, omega, z0=lam / 4)
        assert golden_rule_rate(geom, atom).rate < 1e-12

    def test_two_channel_sum(self, geom):
        atom = centered_atom(geom, midband(geom, (3, 1), (5, 1)), z0=0.3)
        est = golden_rule_rate(geom, atom)
        channels = enumerate_channels(geom, atom)
        expected = sum(2 * ch.rate * (1 + math.cos(ch.phase)) for ch in channels)
        assert est.rate == pytest.approx(expected, rel=1e-12)
        assert set(est.per_channel) == {ch.index for ch in channels}
        assert est.rate == pytest.approx(sum(est.per_channel.values()), rel=1e-14)
        assert min(est.per_channel.values()) >= 0.0

    def test_matches_spectrum_route(self, geom):
        # 2*pi*G(omega_a) against the channel decomposition, both bands
        for omega in (midband(geom), midband(geom, (3, 1), (5, 1))):
            atom = centered_atom(geom, omega, z0=0.23)
            est = golden_rule_rate(geom, atom)
            spectral = 2.0 * math.pi * coupling_spectrum(geom, atom, omega)
            assert spectral == pytest.approx(est.rate, rel=1e-10)

    def test_matches_zero_delay_exponent(self, geom):
        atom = centered_atom(geom, midband(geom), z0=0.17)
        channels = enumerate_channels(geom, atom)
        est = golden_rule_rate(geom, atom)
        t = 1.0
        amp = limiting_amplitude(channels, "all_delays_zero", np.array([t]))[0]
        assert abs(amp) ** 2 == pytest.approx(math.exp(-est.rate * t), rel=1e-10)
        assert est.frequency_shift == pytest.approx(
            sum(ch.rate * math.sin(ch.phase) for ch in channels), rel=1e-12
        )

    def test_monotone_suppression_on_first_quarter(self, geom):
        omega = midband(geom)
        lam = resonant_wavelength(geom, centered_atom(geom, omega, z0=0.0))
        rates = [
            golden_rule_rate(geom, centered_atom(geom, omega, z0=f * lam / 4)).rate
            for f in np.linspace(0.0, 1.0, 9)
        ]
        assert all(a > b for a, b in zip(rates, rates[1:]))

    def test_periodic_in_half_guided_wavelength(self, geom):
        omega = midband(geom)
        k0 = wavenumber_at(geom, IDX11, omega)
        for z0 in (0.13, 0.42):
            r1 = golden_rule_rate(geom, centered_atom(geom, omega, z0=z0)).rate
            r2 = golden_rule_rate(geom, centered_atom(geom, omega, z0=z0 + math.pi / k0)).rate
            assert abs(r1 - r2) <= 1e-12 * max(r1, 1.0)

    def test_below_cutoff_zero_estimate(self, geom):
        cut = cutoff_frequency(geom, IDX11)
        atom = AtomConfig(omega_a=0.5 * cut, dipole_scale=1.0, x0=1.0, y0=0.5, z0=0.2)
        est = golden_rule_rate(geom, atom)
        assert est.rate == 0.0
        assert est.per_channel == {}
        assert est.frequency_shift == 0.0


class TestModulationSpectrum:
    def test_peak_value(self):
        assert modulation_spectrum(2.0, 5.0, 5.0) == pytest.approx(
            2.0 / (2 * math.pi), rel=1e-14
        )

    def test_symmetric_about_transition(self):
        for d in (0.1, 1.0, 7.3):
            assert modulation_spectrum(3.0, 5.0 + d, 5.0) == pytest.approx(
                modulation_spectrum(3.0, 5.0 - d, 5.0), rel=1e-13
            )

    @pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
    def test_unit_area(self, t):
        assert abs(window_integral_oracle(t, 5.0) - 1.0) < 1e-8

    def test_concentrates_at_long_times(self):
        # value a fixed detuning away falls off as the window narrows
        short = modulation_spectrum(1.0, 6.0, 5.0)
        long = modulation_spectrum(100.0, 6.0, 5.0)
        assert long < 0.1 * short
        half_short = 1.0 / 1.0
        assert modulation_spectrum(1.0, 5.0 + half_short, 5.0) < modulation_spectrum(
            1.0, 5.0, 5.0
        )


class TestFiniteTimeRate:
    def test_long_time_limit_reaches_golden_rule(self, geom):
        omega = midband(geom)
        lam = resonant_wavelength(geom, centered_atom(geom, omega, z0=0.0))
        atom = centered_atom(geom, omega, z0=lam / 8, rate=0.05)
        est = golden_rule_rate(geom, atom)
        rate = finite_time_rate(geom, atom, 50.0 / 0.05)
        assert abs(rate - est.rate) / est.rate < 0.01

    def test_gap_shrinks_with_time(self, geom):
        omega = midband(geom)
        lam = resonant_wavelength(geom, centered_atom(geom, omega, z0=0.0))
        atom = centered_atom(geom, omega, z0=lam / 8, rate=0.05)
        est = golden_rule_rate(geom, atom)
        gaps = [
            abs(finite_time_rate(geom, atom, t) - est.rate) / est.rate
            for t in (100.0, 400.0, 1600.0)
        ]
        assert gaps[2] < gaps[0]

    def test_below_cutoff_tail_overlap(self, geom):
        cut = cutoff_frequency(geom, IDX11)
        atom = AtomConfig(omega_a=0.8 * cut, dipole_scale=0.3, x0=1.0, y0=0.5, z0=0.1)
        rate = finite_time_rate(geom, atom, 20.0)
        resonant = centered_atom(geom, midband(geom), z0=0.1, rate=0.3)
        assert 0.0 < rate < golden_rule_rate(geom, resonant).rate

    def test_rejects_nonpositive_time(self, geom):
        atom = centered_atom(geom, midband(geom), z0=0.1)
        with pytest.raises(ValueError):
            finite_time_rate(geom, atom, 0.0)

    def test_unattainable_tolerance_raises(self, geom):
        atom = centered_atom(geom, midband(geom), z0=0.1)
        with pytest.raises(QuadratureFailure):
            finite_time_rate(geom, atom, 50.0, rel_tol=1e-16)


class TestPerturbativeAmplitude:
    def test_starts_at_unity(self, geom):
        atom = centered_atom(geom, midband(geom), z0=0.1)
        assert perturbative_amplitude(geom, atom, 0.0) == 1.0 + 0.0j

    def test_short_time_slope_matches_golden_rule(self, geom):
        # population 1 - R*t once t clears the reservoir correlation time
        rate = 0.00025
        t = 40.0  # scaled time rate*t = 0.01
        omega = midband(geom)
        lam = resonant_wavelength(geom, centered_atom(geom, omega, z0=0.0))
        atom = centered_atom(geom, omega, z0=lam / 8, rate=rate)
        est = golden_rule_rate(geom, atom)
        prob = abs(perturbative_amplitude(geom, atom, t)) ** 2
        assert (1.0 - prob) / (est.rate * t) == pytest.approx(1.0, abs=0.05)

    def test_below_cutoff_stays_excited(self, geom):
        cut = cutoff_frequency(geom, IDX11)
        atom = AtomConfig(omega_a=0.8 * cut, dipole_scale=0.001, x0=1.0, y0=0.5, z0=0.1)
        for t in (5.0, 20.0):
            assert abs(perturbative_amplitude(geom, atom, t)) == pytest.approx(1.0, abs=0.01)
