"""Spontaneous-emission dynamics of a two-level emitter in a semi-infinite
rectangular waveguide: mode structure, Markovian rates, delayed-feedback
dynamics, and a brute-force continuum oracle."""

__version__ = "0.1.0"

from .core import (
    AtomConfig,
    ModeChannel,
    ModeIndex,
    WaveguideGeometry,
    coupling_strength,
    cutoff_frequency,
    density_of_states,
    dispersion,
    enumerate_channels,
    group_velocity,
    resonant_wavelength,
    wavenumber_at,
)
from .dde import (
    AmplitudeTrace,
    DdeProblem,
    limiting_amplitude,
    series_single_mode,
    series_two_mode_tau1_zero,
    solve_dde,
    synthetic_channel,
)
from .errors import (
    AtCutoffSingularity,
    BelowCutoff,
    ConfigError,
    NormDrift,
    NormViolation,
    QuadratureFailure,
    RecurrenceHorizonExceeded,
    StepTooLarge,
    WgqedError,
)
from .kspace import KGrid, build_kgrid, integrate_full, memory_kernel
from .markov import (
    CouplingSpectrum,
    DecayEstimate,
    coupling_spectrum,
    finite_time_rate,
    golden_rule_rate,
    modulation_spectrum,
    perturbative_amplitude,
    sample_coupling_spectrum,
)
from .scenario import (
    PRESETS,
    ScenarioConfig,
    compare_engines,
    load_config,
    resolve_scenario,
    run_preset,
    run_scenario,
    sweep,
)
