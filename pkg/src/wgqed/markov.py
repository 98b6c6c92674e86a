"""Markov-approximation layer: coupling spectrum, decay rates, short-time amplitude.

The coupling spectrum aggregates every open channel at a given frequency,
weighting the squared coupling magnitude by the density of states.  Both
propagation directions of each channel contribute, so the spectrum carries a
factor two relative to a single k branch; with that convention the long-time
rate is exactly 2*pi times the spectrum at the transition frequency and
decomposes per channel as 2*rate_j*(1 + cos(phase_j)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.integrate import quad

from .core import (
    AtomConfig,
    DEFAULT_GUARD_BAND,
    ModeChannel,
    ModeIndex,
    WaveguideGeometry,
    coupled_mode_indices,
    coupling_strength,
    cutoff_frequency,
    density_of_states,
    enumerate_channels,
    transverse_factor,
)
from .errors import AtCutoffSingularity, QuadratureFailure


@dataclass(frozen=True)
class CouplingSpectrum:
    """Spectrum samples on a frequency grid that avoids exact band edges."""

    grid: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class DecayEstimate:
    """Golden-rule decay rate with its per-channel split and frequency shift."""

    rate: float
    per_channel: Mapping[ModeIndex, float]
    frequency_shift: float


def coupling_spectrum(geom: WaveguideGeometry, atom: AtomConfig, omega: float) -> float:
    """Spectral density 2 * sum_open |g|^2 * rho at the given frequency.

    Zero below the lowest coupled cutoff; diverges approaching any coupled
    cutoff from above.  Evaluation exactly at a coupled cutoff raises
    :class:`AtCutoffSingularity`.
    """
    total = 0.0
    for idx in coupled_mode_indices(geom, atom, omega * (1 + 1e-12)):
        cut = cutoff_frequency(geom, idx)
        if omega == cut:
            raise AtCutoffSingularity(f"spectrum evaluated exactly at the {idx} cutoff")
        if cut < omega:
            g = coupling_strength(geom, atom, idx, omega)
            total += 2.0 * g * g * density_of_states(geom, idx, omega)
    return total


def sample_coupling_spectrum(
    geom: WaveguideGeometry, atom: AtomConfig, omegas: Sequence[float]
) -> CouplingSpectrum:
    """Evaluate the spectrum on a grid; the grid must exclude exact cutoffs."""
    grid = np.asarray(omegas, dtype=float)
    values = np.array([coupling_spectrum(geom, atom, w) for w in grid])
    return CouplingSpectrum(grid=grid, values=values)


def decay_from_channels(channels: Sequence[ModeChannel]) -> DecayEstimate:
    """Golden-rule estimate assembled from already-enumerated channels."""
    per = {ch.index: 2.0 * ch.rate * (1.0 + math.cos(ch.phase)) for ch in channels}
    shift = sum(ch.rate * math.sin(ch.phase) for ch in channels)
    return DecayEstimate(rate=sum(per.values()), per_channel=per, frequency_shift=shift)


def golden_rule_rate(
    geom: WaveguideGeometry,
    atom: AtomConfig,
    guard_band: float = DEFAULT_GUARD_BAND,
) -> DecayEstimate:
    """Long-time population decay rate 2*pi*G(omega_a).

    Per channel the rate is 2*rate_j*(1 + cos(phase_j)); the frequency shift
    is sum_j rate_j*sin(phase_j).  Below the lowest coupled cutoff there is no
    decay channel and the estimate is zero with an empty decomposition.
    """
    channels = enumerate_channels(geom, atom, guard_band=guard_band)
    return decay_from_channels(channels)


def modulation_spectrum(t: float, omega, omega_a: float):
    """Observation-time window (t/2pi)*sinc^2((omega - omega_a)*t/2).

    Unit area in omega for every t > 0; its width shrinks like 1/t, pinching
    onto the transition frequency in the long-time limit.
    """
    u = (np.asarray(omega, dtype=float) - omega_a) * t / 2.0
    s = np.sinc(u / np.pi)
    return t / (2.0 * math.pi) * s * s


def _mode_table(geom: WaveguideGeometry, atom: AtomConfig, omega_hi: float):
    """(cutoff, transverse^2) pairs for every coupled mode below omega_hi."""
    table = []
    for idx in coupled_mode_indices(geom, atom, omega_hi):
        tf = transverse_factor(geom, atom, idx)
        table.append((cutoff_frequency(geom, idx), tf * tf))
    return table


def finite_time_rate(
    geom: WaveguideGeometry,
    atom: AtomConfig,
    t: float,
    rel_tol: float = 1e-10,
    window: float = 200.0,
) -> float:
    """Decay rate after a finite observation time t.

    2*pi times the overlap of the coupling spectrum with the observation
    window, integrated over [omega_a - window/t, max(omega_a, lowest cutoff)
    + window/t] clipped to the propagating band.  The domain splits at every
    coupled cutoff and each segment that starts at a cutoff is integrated in
    the variable u = sqrt(omega^2 - cutoff^2), which absorbs the band-edge
    divergence of that channel exactly.

    Raises
    ------
    QuadratureFailure
        If the requested tolerance cannot be met.
    """
    if t <= 0:
        raise ValueError("observation time must be positive")
    half = window / t
    hi = max(atom.omega_a, 0.0) + half
    table = _mode_table(geom, atom, hi)
    if not table:
        return 0.0
    cuts = sorted(cut for cut, _ in table)
    lo = max(cuts[0], atom.omega_a - half)
    hi = max(atom.omega_a, cuts[0]) + half
    edges = [lo] + [c for c in cuts if lo < c < hi] + [hi]
    c = geom.c
    kappa = atom.dipole_scale

    def spectrum_excluding(w: float, skip_cut: float | None) -> float:
        total = 0.0
        for cut, t2 in table:
            if cut < w and cut != skip_cut:
                k = math.sqrt(w * w - cut * cut) / c
                g2 = kappa * cut * cut / (math.pi * w) * t2 * math.cos(k * atom.z0) ** 2
                total += 2.0 * g2 * w / (c * c * k)
        return total

    total = 0.0
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        singular = None
        for cut, t2 in table:
            if abs(a - cut) <= 1e-12 * max(cut, 1.0):
                singular = (cut, t2)
                break
        if singular is None:

            def integrand(w: float) -> float:
                return modulation_spectrum(t, w, atom.omega_a) * spectrum_excluding(w, None)

            res = quad(integrand, a, b, epsabs=min(1e-13, rel_tol), epsrel=rel_tol, limit=800, full_output=1)
        else:
            cut0, t20 = singular

            def transformed(u: float) -> float:
                w = math.hypot(cut0, u)
                # singular channel with k = u/c folded in analytically
                g2 = kappa * cut0 * cut0 / (math.pi * w) * t20 * math.cos(u / c * atom.z0) ** 2
                own = 2.0 * g2 * c  # (2 g^2 w / (c^2 k)) * (u / w) with k = u/c
                rest = spectrum_excluding(w, cut0) * (u / w)
                return modulation_spectrum(t, w, atom.omega_a) * (own + rest)

            u_hi = math.sqrt(max(b * b - cut0 * cut0, 0.0))
            res = quad(
                transformed, 0.0, u_hi, epsabs=min(1e-13, rel_tol), epsrel=rel_tol, limit=800, full_output=1
            )
        if len(res) > 3:
            raise QuadratureFailure(str(res[3]))
        total += res[0]
        err += res[1]
    rate = 2.0 * math.pi * total
    if err > max(1e-11, 100.0 * rel_tol * abs(total)):
        raise QuadratureFailure(f"estimated error {err} too large for tolerance {rel_tol}")
    return rate


def perturbative_amplitude(
    geom: WaveguideGeometry,
    atom: AtomConfig,
    t: float,
    panels_per_decay: float = 40.0,
    nodes_per_panel: int = 10,
) -> complex:
    """Lowest-order amplitude e^{-i*omega_a*t} * [1 - int_0^t (t-s)*K(s)*e^{i*omega_a*s} ds].

    K is the reservoir memory kernel evaluated on the discretized continuum
    (see :func:`wgqed.kspace.memory_kernel`); the kernel carries the positive
    |g|^2 convention, hence the explicit minus sign.  Valid at short times
    only; the caller is responsible for staying in that regime.
    """
    from .kspace import build_kgrid, memory_kernel

    if t < 0:
        raise ValueError("time must be nonnegative")
    if t == 0:
        return 1.0 + 0.0j

    try:
        rate = golden_rule_rate(geom, atom).rate
    except AtCutoffSingularity:
        rate = 0.0
    grid = build_kgrid(geom, atom, t_max=max(t, 1.0))
    # Panels must resolve both the decay scale and the band-window oscillation.
    bandwidth = max(
        max(
            abs(float(np.hypot(g[-1] * geom.c, cutoff_frequency(geom, idx))) - atom.omega_a),
            abs(cutoff_frequency(geom, idx) - atom.omega_a),
        )
        for idx, g in zip(grid.modes, grid.grids)
    )
    n_panels = max(
        1,
        math.ceil(panels_per_decay * max(rate, 1e-12) * t),
        math.ceil(t * bandwidth),
    )
    x, w = np.polynomial.legendre.leggauss(nodes_per_panel)
    edges = np.linspace(0.0, t, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    halfwidth = 0.5 * (edges[1:] - edges[:-1])
    taus = (mid[:, None] + halfwidth[:, None] * x[None, :]).ravel()
    weights = (halfwidth[:, None] * w[None, :]).ravel()
    kernel = memory_kernel(geom, atom, taus, grid=grid)
    phases = np.exp(1j * atom.omega_a * taus)
    integral = np.sum(weights * (t - taus) * kernel * phases)
    return cmath.exp(-1j * atom.omega_a * t) * (1.0 - integral)
