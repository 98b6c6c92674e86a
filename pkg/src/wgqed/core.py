"""Mode structure of a semi-infinite rectangular waveguide coupled to a point dipole.

The guide occupies 0 < x < a, 0 < y < b, z > 0; the wall at z = 0 acts as a
perfect mirror.  A dipole oriented along z couples only to the TM family of
guided modes, indexed by (m, n) with m, n >= 1.  Everything here works in a
dimensionless convention (c = 1 and b = 1 by default); the compound coupling
prefactor ``dipole_scale`` absorbs all dimensional constants.

All containers are frozen dataclasses and every operation is a pure function,
so instances are safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AtCutoffSingularity, BelowCutoff

# Transverse sine factors below this magnitude count as decoupled.
COUPLING_ATOL = 1e-9

# Channels whose cutoff sits within this relative distance of the transition
# frequency are rejected: linearizing the dispersion is invalid at a band edge.
DEFAULT_GUARD_BAND = 1e-3


@dataclass(frozen=True)
class WaveguideGeometry:
    """Cross-section dimensions and wave speed.

    Parameters
    ----------
    a, b : float
        Transverse extents along x and y, with the convention a >= b so the
        lowest TM cutoff belongs to the (1, 1) mode.
    c : float
        Propagation speed; 1 in the dimensionless convention.
    """

    a: float
    b: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0 or self.c <= 0:
            raise ValueError("geometry requires a > 0, b > 0, c > 0")
        if self.a < self.b:
            raise ValueError("convention a >= b violated")


@dataclass(frozen=True)
class AtomConfig:
    """Two-level emitter: transition frequency, coupling prefactor, position.

    ``dipole_scale`` aggregates every dimensional constant of the dipole
    coupling into one positive number; rates scale linearly with it.
    """

    omega_a: float
    dipole_scale: float
    x0: float
    y0: float
    z0: float

    def __post_init__(self):
        if self.omega_a <= 0:
            raise ValueError("transition frequency must be positive")
        if self.dipole_scale <= 0:
            raise ValueError("dipole_scale must be positive")
        if self.x0 <= 0 or self.y0 <= 0 or self.z0 < 0:
            raise ValueError("atom position requires x0 > 0, y0 > 0, z0 >= 0")


@dataclass(frozen=True, order=True)
class ModeIndex:
    """TM mode index pair; both components start at 1."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("TM modes require m >= 1 and n >= 1")

    def __str__(self):
        return f"TM{self.m}{self.n}"


@dataclass(frozen=True)
class ModeChannel:
    """One resonant TM channel as seen by the emitter.

    Fields
    ------
    index : ModeIndex
    cutoff : float
        Band edge of the channel, below the transition frequency.
    k0 : float
        Wavenumber at which the channel is resonant with the emitter.
    group_velocity : float
        Slope of the dispersion at k0, strictly inside (0, c).
    rate : float
        Half-decay-rate constant of the channel (amplitude units).
    phase : float
        Round-trip propagation phase 2*k0*z0 picked up via the mirror.
    delay : float
        Round-trip travel time 2*z0/group_velocity.
    """

    index: ModeIndex
    cutoff: float
    k0: float
    group_velocity: float
    rate: float
    phase: float
    delay: float


def _require_atom_inside(geom: WaveguideGeometry, atom: AtomConfig) -> None:
    if not (0.0 < atom.x0 < geom.a and 0.0 < atom.y0 < geom.b):
        raise ValueError("atom transverse position must lie strictly inside the cross section")


def cutoff_frequency(geom: WaveguideGeometry, idx: ModeIndex) -> float:
    """Band edge of mode (m, n): pi*c*sqrt(m^2/a^2 + n^2/b^2)."""
    return math.pi * geom.c * math.hypot(idx.m / geom.a, idx.n / geom.b)


def dispersion(geom: WaveguideGeometry, idx: ModeIndex, k: float) -> float:
    """Frequency of mode (m, n) at axial wavenumber k; even in k."""
    return math.hypot(geom.c * k, cutoff_frequency(geom, idx))


def wavenumber_at(geom: WaveguideGeometry, idx: ModeIndex, omega: float) -> float:
    """Invert the dispersion: nonnegative k with dispersion(k) = omega.

    Raises
    ------
    BelowCutoff
        If omega < cutoff, where no propagating wavenumber exists.
    """
    cut = cutoff_frequency(geom, idx)
    if omega < cut:
        raise BelowCutoff(f"omega={omega} below cutoff {cut} of {idx}")
    return math.sqrt(omega * omega - cut * cut) / geom.c


def group_velocity(geom: WaveguideGeometry, idx: ModeIndex, omega_a: float) -> float:
    """Group velocity c*sqrt(omega^2 - cutoff^2)/omega, in (0, c) above cutoff."""
    cut = cutoff_frequency(geom, idx)
    if omega_a <= cut:
        raise BelowCutoff(f"omega={omega_a} at or below cutoff {cut} of {idx}")
    return geom.c * math.sqrt(omega_a * omega_a - cut * cut) / omega_a


def density_of_states(geom: WaveguideGeometry, idx: ModeIndex, omega: float) -> float:
    """One-sided density of propagating modes, omega / (c*sqrt(omega^2 - cutoff^2)).

    Diverges like (omega - cutoff)^(-1/2) at the band edge; evaluation exactly
    at the cutoff raises :class:`AtCutoffSingularity`, strictly below raises
    :class:`BelowCutoff`.
    """
    cut = cutoff_frequency(geom, idx)
    if omega < cut:
        raise BelowCutoff(f"omega={omega} below cutoff {cut} of {idx}")
    if omega == cut:
        raise AtCutoffSingularity(f"density of states diverges at the {idx} cutoff")
    return omega / (geom.c * math.sqrt(omega * omega - cut * cut))


def transverse_factor(geom: WaveguideGeometry, atom: AtomConfig, idx: ModeIndex) -> float:
    """Signed standing-wave profile sin(m*pi*x0/a) * sin(n*pi*y0/b) at the atom."""
    return math.sin(idx.m * math.pi * atom.x0 / geom.a) * math.sin(idx.n * math.pi * atom.y0 / geom.b)


def coupling_strength(geom: WaveguideGeometry, atom: AtomConfig, idx: ModeIndex, omega: float) -> float:
    """Magnitude of the dipole coupling to mode (m, n) at frequency omega.

    |g| = sqrt(kappa * cutoff^2 / (pi * omega)) * |sin * sin * cos(k z0)| with
    kappa = dipole_scale.  The coupling carries a fixed global phase that no
    observable depends on, so only the magnitude is exposed.
    """
    _require_atom_inside(geom, atom)
    cut = cutoff_frequency(geom, idx)
    if omega < cut:
        raise BelowCutoff(f"omega={omega} below cutoff {cut} of {idx}")
    k = math.sqrt(omega * omega - cut * cut) / geom.c
    radial = math.sqrt(atom.dipole_scale * cut * cut / (math.pi * omega))
    return radial * abs(transverse_factor(geom, atom, idx) * math.cos(k * atom.z0))


def channel_rate(geom: WaveguideGeometry, atom: AtomConfig, idx: ModeIndex) -> float:
    """Per-channel amplitude decay constant kappa*cutoff^2*sin^2*sin^2 / (omega_a * v)."""
    cut = cutoff_frequency(geom, idx)
    v = group_velocity(geom, idx, atom.omega_a)
    t = transverse_factor(geom, atom, idx)
    return atom.dipole_scale * cut * cut * t * t / (atom.omega_a * v)


def coupled_mode_indices(geom: WaveguideGeometry, atom: AtomConfig, omega: float):
    """All TM indices with cutoff below omega and nonvanishing transverse coupling.

    The search bound m <= ceil(a*omega/(pi*c)), n <= ceil(b*omega/(pi*c)) is
    exhaustive: any larger index puts the cutoff above omega.
    """
    _require_atom_inside(geom, atom)
    m_max = math.ceil(geom.a * omega / (math.pi * geom.c)) + 1
    n_max = math.ceil(geom.b * omega / (math.pi * geom.c)) + 1
    found = []
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            idx = ModeIndex(m, n)
            if cutoff_frequency(geom, idx) >= omega:
                continue
            if abs(transverse_factor(geom, atom, idx)) < COUPLING_ATOL:
                continue
            found.append(idx)
    found.sort(key=lambda i: (cutoff_frequency(geom, i), (i.m, i.n)))
    return found


def enumerate_channels(
    geom: WaveguideGeometry,
    atom: AtomConfig,
    guard_band: float = DEFAULT_GUARD_BAND,
) -> list[ModeChannel]:
    """Assemble every resonant TM channel, sorted by ascending cutoff.

    A channel is resonant when its cutoff lies below the transition frequency
    and its transverse profile does not vanish at the atom.  Ties in cutoff
    (possible for rational a/b) break lexicographically on (m, n).

    Raises
    ------
    AtCutoffSingularity
        If the transition frequency falls within ``guard_band`` (relative)
        of any coupled cutoff; the linearized treatment is invalid there.
    """
    _require_atom_inside(geom, atom)
    wa = atom.omega_a
    # Bound generous enough to guard-check cutoffs just above omega_a too.
    m_max = math.ceil(geom.a * wa * (1 + guard_band) / (math.pi * geom.c)) + 1
    n_max = math.ceil(geom.b * wa * (1 + guard_band) / (math.pi * geom.c)) + 1
    channels = []
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            idx = ModeIndex(m, n)
            t = transverse_factor(geom, atom, idx)
            if abs(t) < COUPLING_ATOL:
                continue
            cut = cutoff_frequency(geom, idx)
            if abs(wa - cut) < guard_band * wa:
                raise AtCutoffSingularity(
                    f"omega_a={wa} within guard band of the {idx} cutoff {cut}"
                )
            if cut >= wa:
                continue
            v = group_velocity(geom, idx, wa)
            k0 = wavenumber_at(geom, idx, wa)
            channels.append(
                ModeChannel(
                    index=idx,
                    cutoff=cut,
                    k0=k0,
                    group_velocity=v,
                    rate=atom.dipole_scale * cut * cut * t * t / (wa * v),
                    phase=2.0 * k0 * atom.z0,
                    delay=2.0 * atom.z0 / v,
                )
            )
    channels.sort(key=lambda ch: (ch.cutoff, (ch.index.m, ch.index.n)))
    return channels


def resonant_wavelength(geom: WaveguideGeometry, atom: AtomConfig, idx: ModeIndex | None = None) -> float:
    """Guided wavelength 2*pi/k0 of the given channel (lowest TM mode by default)."""
    if idx is None:
        idx = ModeIndex(1, 1)
    k0 = wavenumber_at(geom, idx, atom.omega_a)
    if k0 == 0.0:
        raise AtCutoffSingularity("resonant wavelength undefined exactly at cutoff")
    return 2.0 * math.pi / k0
