"""Brute-force ground truth on a discretized k continuum.

Integrates the coupled atom-field amplitude equations directly, with no
linearization of the dispersion, in the frame that rotates each field mode at
its own frequency.  Serves as the oracle for both the Markov layer and the
delay-equation engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    AtomConfig,
    ModeIndex,
    WaveguideGeometry,
    coupled_mode_indices,
    cutoff_frequency,
    enumerate_channels,
    transverse_factor,
)
from .dde import AmplitudeTrace
from .errors import NormDrift, RecurrenceHorizonExceeded


@dataclass(frozen=True)
class KGrid:
    """Per-mode uniform wavenumber grids on [0, K] with trapezoid weights.

    The physical integral runs over both propagation directions; the
    integrand is even in k, so the weights already include the factor two
    that folds the negative branch onto [0, K].
    """

    modes: tuple[ModeIndex, ...]
    grids: tuple[np.ndarray, ...]
    weights: tuple[np.ndarray, ...]

    @property
    def spacing(self) -> float:
        return float(self.grids[0][1] - self.grids[0][0])


def build_kgrid(
    geom: WaveguideGeometry,
    atom: AtomConfig,
    t_max: float,
    modes: Sequence[ModeIndex] | None = None,
    linewidth_margin: float = 50.0,
    recurrence_factor: float = 4.0,
    band_floor: float = 0.1,
) -> KGrid:
    """Default discretization: band window plus the full lower band edge.

    Each mode grid spans k in [0, K] with omega(K) = max(omega_a, cutoff) +
    margin, margin = max(linewidth_margin * total_rate, band_floor * lowest
    cutoff).  The spacing 2*pi/(c * recurrence_factor * t_max) keeps the
    recurrence time of every discretized mode at least recurrence_factor
    times the horizon (group velocities never exceed c).
    """
    if modes is None:
        modes = tuple(ch.index for ch in enumerate_channels(geom, atom))
        if not modes:
            modes = tuple(coupled_mode_indices(geom, atom, 2.0 * atom.omega_a)[:1])
    modes = tuple(modes)
    if not modes:
        raise ValueError("no coupled mode available for the k grid")

    try:
        rate_total = sum(ch.rate for ch in enumerate_channels(geom, atom))
    except Exception:
        rate_total = 0.0
    lowest = min(cutoff_frequency(geom, idx) for idx in modes)
    margin = max(linewidth_margin * rate_total, band_floor * lowest)
    dk = 2.0 * math.pi / (geom.c * recurrence_factor * t_max)

    grids = []
    weights = []
    for idx in modes:
        cut = cutoff_frequency(geom, idx)
        omega_top = max(atom.omega_a, cut) + margin
        k_top = math.sqrt(omega_top * omega_top - cut * cut) / geom.c
        n = max(int(math.ceil(k_top / dk)), 32)
        grid = np.linspace(0.0, n * dk, n + 1)
        w = np.full(n + 1, 2.0 * dk)
        w[0] = dk
        w[-1] = dk
        grids.append(grid)
        weights.append(w)
    return KGrid(modes=modes, grids=tuple(grids), weights=tuple(weights))


def _signed_coupling(geom, atom, idx, k: np.ndarray, omega: np.ndarray) -> np.ndarray:
    cut = cutoff_frequency(geom, idx)
    t = transverse_factor(geom, atom, idx)
    return np.sqrt(atom.dipole_scale / (math.pi * omega)) * cut * t * np.cos(k * atom.z0)


def level_shift(geom: WaveguideGeometry, atom: AtomConfig, grid: KGrid) -> float:
    """Mirror-free second-order frequency pull of the emitter on the band window.

    Principal value of int d omega J0(omega) / (omega_a - omega), where J0 is
    the z0-independent (infinite-guide) part of the spectral density.  The
    mirror's oscillatory part of the spectrum is genuine retarded dynamics and
    is deliberately left out.  This smooth pull grows logarithmically with the
    window, so it belongs to the truncation, not the physics;
    :func:`integrate_full` cancels it by detuning the bare frequency.
    """
    from scipy.integrate import quad

    wa = atom.omega_a
    total = 0.0
    for idx, kgrid in zip(grid.modes, grid.grids):
        cut = cutoff_frequency(geom, idx)
        top = float(np.hypot(geom.c * kgrid[-1], cut))
        tfac = transverse_factor(geom, atom, idx)

        def spectral(w: float) -> float:
            kk = math.sqrt(w * w - cut * cut) / geom.c
            g2 = atom.dipole_scale * cut * cut / (math.pi * w) * tfac * tfac
            return g2 * w / (geom.c * geom.c * kk)

        def edge_sub(u: float) -> float:
            w = math.sqrt(cut * cut + u * u)
            return spectral(w) / (wa - w) * (u / w)

        if cut < wa < top:
            d = 0.5 * min(wa - cut, top - wa)
            u_hi = math.sqrt((wa - d) ** 2 - cut * cut)
            total += quad(edge_sub, 0.0, u_hi, limit=400)[0]
            total += quad(
                lambda u: (spectral(wa - u) - spectral(wa + u)) / u, 0.0, d, limit=400
            )[0]
            total += quad(lambda w: spectral(w) / (wa - w), wa + d, top, limit=400)[0]
        else:
            u_hi = math.sqrt(top * top - cut * cut)
            total += quad(edge_sub, 0.0, u_hi, limit=400)[0]
    return total


def default_step(grid: KGrid, geom, atom, t_max: float, drift_budget: float = 1e-9) -> float:
    """Step choice keeping the accumulated norm error of the one-step rule
    near drift_budget: total drift ~ t_max * delta_max^6 * h^5 / 144."""
    delta_max = 0.0
    for idx, k in zip(grid.modes, grid.grids):
        omega = np.hypot(geom.c * k, cutoff_frequency(geom, idx))
        delta_max = max(delta_max, float(np.max(np.abs(omega - atom.omega_a))))
    if delta_max == 0.0:
        return t_max / 1000.0
    h = (drift_budget * 144.0 / (t_max * delta_max**6)) ** 0.2
    return min(h, 0.2 / delta_max, t_max / 100.0)


def integrate_full(
    geom: WaveguideGeometry,
    atom: AtomConfig,
    grid: KGrid,
    t_max: float,
    step: float | None = None,
    norm_tol: float = 1e-8,
    recurrence_factor: float = 4.0,
    renormalize_shift: bool = True,
) -> AmplitudeTrace:
    """Evolve the single-excitation amplitudes on the discretized continuum.

    Returns the slowly varying atomic amplitude on a uniform grid.  The total
    norm |atom|^2 + sum weights*|field|^2 is checked at every step.

    With ``renormalize_shift`` (default) the bare transition frequency is
    detuned by the window's second-order level shift so the dressed resonance
    sits at ``atom.omega_a``; without it the emitter rotates at a rate that
    depends on the arbitrary band-window truncation.

    Raises
    ------
    RecurrenceHorizonExceeded
        If t_max exceeds the grid's reliable window 2*pi/(c*dk)/factor.
    NormDrift
        If norm conservation fails beyond norm_tol.
    """
    dk = grid.spacing
    horizon = 2.0 * math.pi / (geom.c * dk) / recurrence_factor
    if t_max > horizon * (1 + 1e-9):
        raise RecurrenceHorizonExceeded(f"t_max={t_max} beyond reliable window {horizon}")
    if step is None:
        step = default_step(grid, geom, atom, t_max)
    counter = 1j * level_shift(geom, atom, grid) if renormalize_shift else 0.0j

    k_all = np.concatenate(grid.grids)
    w_all = np.concatenate(grid.weights)
    g_all = []
    delta_all = []
    for idx, k in zip(grid.modes, grid.grids):
        omega = np.hypot(geom.c * k, cutoff_frequency(geom, idx))
        g_all.append(_signed_coupling(geom, atom, idx, k, omega))
        delta_all.append(omega - atom.omega_a)
    g = np.concatenate(g_all)
    delta = np.concatenate(delta_all)
    wg = w_all * g

    n_steps = int(math.ceil(t_max / step - 1e-12)) if t_max > 0 else 0
    h = step
    # exp(i*delta*t) advanced multiplicatively, half a step at a time.
    rot_half = np.exp(1j * delta * (h / 2.0))

    eps = 1.0 + 0.0j
    phi = np.zeros_like(g, dtype=complex)
    values = np.empty(n_steps + 1, dtype=complex)
    values[0] = eps

    def deriv(e, p, rot):
        # counter term is purely imaginary: it rotates, never changes the norm
        de = counter * e - np.dot(wg, p * np.conj(rot))
        dp = g * (e * rot)
        return de, dp

    rot0 = np.ones_like(g, dtype=complex)
    worst_drift = 0.0
    for i in range(n_steps):
        rot1 = rot0 * rot_half
        rot2 = rot1 * rot_half
        de1, dp1 = deriv(eps, phi, rot0)
        de2, dp2 = deriv(eps + 0.5 * h * de1, phi + 0.5 * h * dp1, rot1)
        de3, dp3 = deriv(eps + 0.5 * h * de2, phi + 0.5 * h * dp2, rot1)
        de4, dp4 = deriv(eps + h * de3, phi + h * dp3, rot2)
        eps = eps + (h / 6.0) * (de1 + 2 * de2 + 2 * de3 + de4)
        phi = phi + (h / 6.0) * (dp1 + 2 * dp2 + 2 * dp3 + dp4)
        rot0 = rot2
        values[i + 1] = eps
        norm = abs(eps) ** 2 + float(np.dot(w_all, np.abs(phi) ** 2))
        worst_drift = max(worst_drift, abs(norm - 1.0))
        if abs(norm - 1.0) > norm_tol:
            raise NormDrift(f"norm drifted to {norm} at step {i + 1}")

    times = np.arange(n_steps + 1) * h
    return AmplitudeTrace(
        times=times, amplitudes=values, metadata={"max_norm_drift": worst_drift}
    )


def memory_kernel(
    geom: WaveguideGeometry,
    atom: AtomConfig,
    tau,
    grid: KGrid | None = None,
):
    """Reservoir response kernel sum_modes int dk |g|^2 exp(-i*omega*tau).

    Evaluated on the (finite) band window of the grid, in the manifestly
    decaying |g|^2 convention: the kernel at tau = 0 is the positive band
    integral of the squared coupling.
    """
    tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(tau_arr < 0):
        raise ValueError("tau must be nonnegative")
    if grid is None:
        grid = build_kgrid(geom, atom, t_max=max(float(np.max(tau_arr, initial=0.0)), 1.0))
    out = np.zeros(tau_arr.shape, dtype=complex)
    for idx, k, w in zip(grid.modes, grid.grids, grid.weights):
        omega = np.hypot(geom.c * k, cutoff_frequency(geom, idx))
        g = _signed_coupling(geom, atom, idx, k, omega)
        out += np.exp(-1j * np.outer(tau_arr, omega)) @ (w * g * g)
    return out if np.ndim(tau) else complex(out[0])
