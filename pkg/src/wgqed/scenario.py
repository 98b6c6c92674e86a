"""Scenario configuration, run manifests, figure presets, sweeps, comparisons.

A scenario is a flat key-value text file with dotted section keys (parsed
here without any format-library semantics).  Resolving a scenario produces
concrete physics: geometry, emitter, channels and the normalization rate that
defines the scaled time axis of every output.  Each run writes one trace CSV,
a figure, and a manifest that fully determines the run; re-running from the
manifest reproduces the CSV byte for byte.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__
from .core import (
    AtomConfig,
    ModeChannel,
    ModeIndex,
    WaveguideGeometry,
    channel_rate,
    cutoff_frequency,
    enumerate_channels,
    group_velocity,
)
from .dde import AmplitudeTrace, DdeProblem, series_single_mode, solve_dde
from .errors import ConfigError
from .kspace import build_kgrid, integrate_full
from .markov import decay_from_channels, golden_rule_rate
from .report import (
    render_sweep_figure,
    render_trace_figure,
    sha256_of,
    write_kv_text,
    write_rows_csv,
    write_trace_csv,
)

ENGINES = ("dde", "kspace", "markov", "series")
ENGINE_VERSION = f"wgqed {__version__}"


# --- configuration -----------------------------------------------------------


@dataclass(frozen=True)
class MidbandBetween:
    lower: ModeIndex
    upper: ModeIndex


@dataclass(frozen=True)
class AbsoluteOmega:
    value: float


@dataclass(frozen=True)
class FractionOfLambda:
    value: float


@dataclass(frozen=True)
class AbsoluteZ:
    value: float


@dataclass(frozen=True)
class ByGammaTau:
    gamma_tau1: float
    phase1: float


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete, serializable description of one simulation run."""

    a_over_b: float
    omega_mode: MidbandBetween | AbsoluteOmega
    z0_mode: FractionOfLambda | AbsoluteZ | ByGammaTau
    x0_frac: float = 0.5
    y0_frac: float = 0.5
    engine: str = "dde"
    step: float | None = None  # grid step in scaled-time units
    t_max_gamma: float = 10.0
    mode_filter: tuple[ModeIndex, ...] | None = None
    out_dir: str = "runs"
    trace_name: str = "trace"

    def __post_init__(self):
        if self.a_over_b < 1.0:
            raise ConfigError("geometry.a_over_b must be >= 1")
        if not (0.0 < self.x0_frac < 1.0 and 0.0 < self.y0_frac < 1.0):
            raise ConfigError("atom.x0_frac and atom.y0_frac must lie in (0, 1)")
        if self.engine not in ENGINES:
            raise ConfigError(f"solver.engine must be one of {ENGINES}")
        if self.t_max_gamma <= 0:
            raise ConfigError("solver.t_max_gamma must be positive")
        if self.step is not None and self.step <= 0:
            raise ConfigError("solver.step must be positive when given")


def parse_kv_text(text: str) -> dict[str, str]:
    """Parse `key = value` lines; `#` starts a comment; duplicate keys are errors."""
    out: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected `key = value`, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {ln}: empty key or value")
        if key in out:
            raise ConfigError(f"line {ln}: duplicate key {key!r}")
        out[key] = value
    return out


def _need(mapping: Mapping[str, str], key: str) -> str:
    if key not in mapping:
        raise ConfigError(f"missing required key {key!r}")
    return mapping[key]


def _as_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected a number, got {value!r}") from None


def _as_index(key: str, value: str) -> ModeIndex:
    parts = value.split(",")
    if len(parts) != 2:
        raise ConfigError(f"key {key!r}: expected `m,n`, got {value!r}")
    try:
        return ModeIndex(int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {exc}") from None


def config_from_mapping(mapping: Mapping[str, str]) -> ScenarioConfig:
    """Validate a flat mapping against the scenario schema (strict keys)."""
    used: set[str] = set()

    def take(key: str, required: bool = True) -> str | None:
        used.add(key)
        if key in mapping:
            return mapping[key]
        if required:
            raise ConfigError(f"missing required key {key!r}")
        return None

    a_over_b = _as_float("geometry.a_over_b", _need(mapping, "geometry.a_over_b"))
    used.add("geometry.a_over_b")

    omode = take("atom.omega_mode")
    if omode == "midband_between":
        omega_mode: MidbandBetween | AbsoluteOmega = MidbandBetween(
            lower=_as_index("atom.omega_mode.lower", take("atom.omega_mode.lower")),
            upper=_as_index("atom.omega_mode.upper", take("atom.omega_mode.upper")),
        )
    elif omode == "absolute":
        omega_mode = AbsoluteOmega(_as_float("atom.omega_mode.value", take("atom.omega_mode.value")))
    else:
        raise ConfigError("atom.omega_mode must be `midband_between` or `absolute`")

    zmode = take("atom.z0_mode")
    if zmode == "fraction_of_lambda1A":
        z0_mode: FractionOfLambda | AbsoluteZ | ByGammaTau = FractionOfLambda(
            _as_float("atom.z0_mode.value", take("atom.z0_mode.value"))
        )
        if z0_mode.value < 0:
            raise ConfigError("atom.z0_mode.value must be >= 0")
    elif zmode == "absolute":
        z0_mode = AbsoluteZ(_as_float("atom.z0_mode.value", take("atom.z0_mode.value")))
        if z0_mode.value < 0:
            raise ConfigError("atom.z0_mode.value must be >= 0")
    elif zmode == "by_gamma_tau1":
        z0_mode = ByGammaTau(
            gamma_tau1=_as_float("atom.z0_mode.gamma_tau1", take("atom.z0_mode.gamma_tau1")),
            phase1=_as_float("atom.z0_mode.phase1", take("atom.z0_mode.phase1")),
        )
        if z0_mode.gamma_tau1 <= 0:
            raise ConfigError("atom.z0_mode.gamma_tau1 must be positive")
    else:
        raise ConfigError(
            "atom.z0_mode must be `fraction_of_lambda1A`, `absolute` or `by_gamma_tau1`"
        )

    x0 = take("atom.x0_frac", required=False)
    y0 = take("atom.y0_frac", required=False)
    engine = take("solver.engine", required=False) or "dde"
    step = take("solver.step", required=False)
    t_max = take("solver.t_max_gamma")
    modes = take("solver.modes", required=False)
    out_dir = take("output.directory", required=False) or "runs"
    trace = take("output.trace_name", required=False) or "trace"

    unknown = set(mapping) - used
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")

    mode_filter = None
    if modes is not None:
        mode_filter = tuple(_as_index("solver.modes", part) for part in modes.split(";"))

    return ScenarioConfig(
        a_over_b=a_over_b,
        omega_mode=omega_mode,
        z0_mode=z0_mode,
        x0_frac=_as_float("atom.x0_frac", x0) if x0 is not None else 0.5,
        y0_frac=_as_float("atom.y0_frac", y0) if y0 is not None else 0.5,
        engine=engine,
        step=_as_float("solver.step", step) if step is not None else None,
        t_max_gamma=_as_float("solver.t_max_gamma", t_max),
        mode_filter=mode_filter,
        out_dir=out_dir,
        trace_name=trace,
    )


def config_to_mapping(config: ScenarioConfig) -> dict[str, str]:
    """Inverse of :func:`config_from_mapping`, used to embed configs in manifests."""
    out: dict[str, str] = {"geometry.a_over_b": repr(config.a_over_b)}
    if isinstance(config.omega_mode, MidbandBetween):
        out["atom.omega_mode"] = "midband_between"
        out["atom.omega_mode.lower"] = f"{config.omega_mode.lower.m},{config.omega_mode.lower.n}"
        out["atom.omega_mode.upper"] = f"{config.omega_mode.upper.m},{config.omega_mode.upper.n}"
    else:
        out["atom.omega_mode"] = "absolute"
        out["atom.omega_mode.value"] = repr(config.omega_mode.value)
    if isinstance(config.z0_mode, FractionOfLambda):
        out["atom.z0_mode"] = "fraction_of_lambda1A"
        out["atom.z0_mode.value"] = repr(config.z0_mode.value)
    elif isinstance(config.z0_mode, AbsoluteZ):
        out["atom.z0_mode"] = "absolute"
        out["atom.z0_mode.value"] = repr(config.z0_mode.value)
    else:
        out["atom.z0_mode"] = "by_gamma_tau1"
        out["atom.z0_mode.gamma_tau1"] = repr(config.z0_mode.gamma_tau1)
        out["atom.z0_mode.phase1"] = repr(config.z0_mode.phase1)
    out["atom.x0_frac"] = repr(config.x0_frac)
    out["atom.y0_frac"] = repr(config.y0_frac)
    out["solver.engine"] = config.engine
    if config.step is not None:
        out["solver.step"] = repr(config.step)
    out["solver.t_max_gamma"] = repr(config.t_max_gamma)
    if config.mode_filter is not None:
        out["solver.modes"] = ";".join(f"{i.m},{i.n}" for i in config.mode_filter)
    out["output.directory"] = config.out_dir
    out["output.trace_name"] = config.trace_name
    return out


def load_config(path: str | Path) -> ScenarioConfig:
    """Load a scenario from a config file or from a run manifest."""
    mapping = parse_kv_text(Path(path).read_text(encoding="utf-8"))
    if any(k.startswith("config.") for k in mapping):
        mapping = {
            k[len("config."):]: v for k, v in mapping.items() if k.startswith("config.")
        }
    return config_from_mapping(mapping)


# --- resolution --------------------------------------------------------------


@dataclass(frozen=True)
class ResolvedScenario:
    """Concrete physics of one run, plus the scaled-time normalization."""

    config: ScenarioConfig
    geom: WaveguideGeometry
    atom: AtomConfig
    channels: tuple[ModeChannel, ...]
    gamma_norm: float
    lambda_1a: float | None

    @property
    def t_max(self) -> float:
        return self.config.t_max_gamma / self.gamma_norm

    @property
    def step(self) -> float | None:
        return self.config.step / self.gamma_norm if self.config.step is not None else None


def resolve_scenario(config: ScenarioConfig) -> ResolvedScenario:
    """Turn a scenario description into geometry, emitter and channels.

    The coupling prefactor is fixed so the lowest channel's rate constant is 1
    (scaled time equals rate times physical time), except in the
    ``by_gamma_tau1`` mode where it is chosen to hit the requested
    delay-rate product exactly, with the round-trip phase matched modulo 2*pi
    by picking the atom-mirror distance (smallest positive winding).
    """
    geom = WaveguideGeometry(a=config.a_over_b, b=1.0, c=1.0)
    lowest = ModeIndex(1, 1)

    if isinstance(config.omega_mode, MidbandBetween):
        omega_a = 0.5 * (
            cutoff_frequency(geom, config.omega_mode.lower)
            + cutoff_frequency(geom, config.omega_mode.upper)
        )
    else:
        omega_a = config.omega_mode.value
    if omega_a <= 0:
        raise ConfigError("resolved transition frequency must be positive")

    cut11 = cutoff_frequency(geom, lowest)
    k10 = math.sqrt(omega_a**2 - cut11**2) if omega_a > cut11 else 0.0
    lambda_1a = 2.0 * math.pi / k10 if k10 > 0 else None

    if isinstance(config.z0_mode, FractionOfLambda):
        if lambda_1a is None:
            raise ConfigError("fraction_of_lambda1A needs omega_a above the lowest cutoff")
        z0 = config.z0_mode.value * lambda_1a
    elif isinstance(config.z0_mode, AbsoluteZ):
        z0 = config.z0_mode.value
    else:
        if k10 == 0.0:
            raise ConfigError("by_gamma_tau1 needs omega_a above the lowest cutoff")
        winding = 0
        while config.z0_mode.phase1 + 2.0 * math.pi * winding <= 0.0:
            winding += 1
        z0 = (config.z0_mode.phase1 + 2.0 * math.pi * winding) / (2.0 * k10)

    probe = AtomConfig(
        omega_a=omega_a,
        dipole_scale=1.0,
        x0=config.x0_frac * geom.a,
        y0=config.y0_frac * geom.b,
        z0=z0,
    )
    # Rate of the lowest channel at unit coupling prefactor, used to scale it.
    try:
        base_rate = channel_rate(geom, probe, lowest)
    except Exception:
        base_rate = 0.0

    if isinstance(config.z0_mode, ByGammaTau):
        if base_rate <= 0:
            raise ConfigError("by_gamma_tau1 needs a coupled lowest channel")
        tau1 = 2.0 * z0 / group_velocity(geom, lowest, omega_a)
        if tau1 <= 0:
            raise ConfigError("by_gamma_tau1 needs a nonzero atom-mirror distance")
        kappa = config.z0_mode.gamma_tau1 / (base_rate * tau1)
    else:
        kappa = 1.0 / base_rate if base_rate > 0 else 1.0

    atom = replace(probe, dipole_scale=kappa)
    channels = tuple(enumerate_channels(geom, atom))
    if config.mode_filter is not None:
        wanted = set(config.mode_filter)
        channels = tuple(ch for ch in channels if ch.index in wanted)
        missing = wanted - {ch.index for ch in channels}
        if missing:
            raise ConfigError(f"solver.modes includes non-resonant modes: {sorted(map(str, missing))}")
    gamma_norm = channels[0].rate if channels else 1.0
    return ResolvedScenario(
        config=config,
        geom=geom,
        atom=atom,
        channels=channels,
        gamma_norm=gamma_norm,
        lambda_1a=lambda_1a,
    )


# --- engines -----------------------------------------------------------------


def _dde_grid(resolved: ResolvedScenario) -> DdeProblem:
    if not resolved.channels:
        raise ConfigError("no resonant channel: nothing for the dde/series engine to integrate")
    return DdeProblem.for_channels(resolved.channels, resolved.t_max, resolved.step)


def run_engine(resolved: ResolvedScenario, engine: str | None = None) -> AmplitudeTrace:
    """Produce the amplitude trace for a resolved scenario with one engine."""
    engine = engine or resolved.config.engine
    if engine == "dde":
        return solve_dde(_dde_grid(resolved))
    if engine == "series":
        if len(resolved.channels) != 1:
            raise ConfigError("series engine requires exactly one resonant channel")
        ch = resolved.channels[0]
        problem = _dde_grid(resolved)
        n = int(math.ceil(problem.t_max / problem.step - 1e-12))
        times = np.arange(n + 1) * problem.step
        amps = series_single_mode(ch.rate, ch.phase, ch.delay, times)
        return AmplitudeTrace(times=times, amplitudes=amps)
    if engine == "markov":
        estimate = decay_from_channels(resolved.channels)
        step = resolved.step if resolved.step is not None else resolved.t_max / 1000.0
        n = int(math.ceil(resolved.t_max / step - 1e-12))
        times = np.arange(n + 1) * step
        expo = 0.5 * estimate.rate + 1j * estimate.frequency_shift
        return AmplitudeTrace(times=times, amplitudes=np.exp(-expo * times))
    if engine == "kspace":
        modes = tuple(ch.index for ch in resolved.channels) or None
        grid = build_kgrid(resolved.geom, resolved.atom, t_max=resolved.t_max, modes=modes)
        return integrate_full(resolved.geom, resolved.atom, grid, resolved.t_max)
    raise ConfigError(f"unknown engine {engine!r}")


# --- manifests and runs ------------------------------------------------------


@dataclass(frozen=True)
class RunManifest:
    """Flat description of a completed run; sufficient to reproduce it."""

    entries: Mapping[str, str]
    path: Path

    @property
    def files(self) -> list[str]:
        return self.entries["output.files"].split(",")


def _resolved_entries(resolved: ResolvedScenario, step_abs: float | None) -> dict[str, str]:
    out = {
        "resolved.geometry.a": repr(resolved.geom.a),
        "resolved.geometry.b": repr(resolved.geom.b),
        "resolved.geometry.c": repr(resolved.geom.c),
        "resolved.atom.omega_a": repr(resolved.atom.omega_a),
        "resolved.atom.dipole_scale": repr(resolved.atom.dipole_scale),
        "resolved.atom.x0": repr(resolved.atom.x0),
        "resolved.atom.y0": repr(resolved.atom.y0),
        "resolved.atom.z0": repr(resolved.atom.z0),
        "resolved.gamma_norm": repr(resolved.gamma_norm),
        "resolved.t_max": repr(resolved.t_max),
    }
    if resolved.lambda_1a is not None:
        out["resolved.lambda_1a"] = repr(resolved.lambda_1a)
    if step_abs is not None:
        out["resolved.step"] = repr(step_abs)
    for i, ch in enumerate(resolved.channels, start=1):
        prefix = f"resolved.channel.{i}"
        out[f"{prefix}.index"] = f"{ch.index.m},{ch.index.n}"
        out[f"{prefix}.cutoff"] = repr(ch.cutoff)
        out[f"{prefix}.k0"] = repr(ch.k0)
        out[f"{prefix}.group_velocity"] = repr(ch.group_velocity)
        out[f"{prefix}.rate"] = repr(ch.rate)
        out[f"{prefix}.phase"] = repr(ch.phase)
        out[f"{prefix}.delay"] = repr(ch.delay)
    return out


def run_scenario(
    config: ScenarioConfig,
    out_dir: str | Path | None = None,
    render: bool = True,
) -> RunManifest:
    """Resolve, integrate, and write the trace CSV, figure, and manifest.

    The CSV time column is in scaled (rate times time) units so identical
    configurations produce byte-identical CSVs regardless of output location.
    """
    resolved = resolve_scenario(config)
    directory = Path(out_dir) if out_dir is not None else Path(config.out_dir)
    directory.mkdir(parents=True, exist_ok=True)

    trace = run_engine(resolved)
    t_gamma = trace.times * resolved.gamma_norm
    csv_path = directory / f"{config.trace_name}.csv"
    write_trace_csv(csv_path, t_gamma, trace.amplitudes)
    files = [csv_path.name]

    if render:
        fig_path = directory / f"{config.trace_name}.png"
        render_trace_figure(
            fig_path,
            [(config.trace_name, t_gamma, trace.amplitudes)],
            title=config.trace_name,
        )
        files.append(fig_path.name)

    step_abs = None
    if len(trace.times) > 1:
        step_abs = float(trace.times[1] - trace.times[0])

    entries: dict[str, str] = {
        "manifest.format": "1",
        "manifest.engine_version": ENGINE_VERSION,
    }
    config_map = config_to_mapping(config)
    digest_src = "\n".join(f"{k} = {v}" for k, v in config_map.items())
    for key, value in config_map.items():
        entries[f"config.{key}"] = value
    entries.update(_resolved_entries(resolved, step_abs))
    entries["output.files"] = ",".join(files)
    entries["digest.inputs.sha256"] = hashlib.sha256(digest_src.encode()).hexdigest()
    entries[f"digest.{csv_path.name}.sha256"] = sha256_of(csv_path)

    manifest_path = directory / f"{config.trace_name}.manifest.txt"
    write_kv_text(manifest_path, entries)
    return RunManifest(entries=entries, path=manifest_path)


# --- engine comparison -------------------------------------------------------


def compare_engines(
    config: ScenarioConfig,
    engines: Sequence[str],
    out_dir: str | Path | None = None,
) -> list[tuple[str, str, float, float]]:
    """Run several engines on identical physics and tabulate their deviations.

    Returns (engine_a, engine_b, max_abs, mean_abs) rows for every pair and
    writes them as ``compare.csv`` when an output directory is given.  Traces
    on different grids are linearly resampled onto the first engine's grid.
    """
    if not engines:
        raise ConfigError("at least one engine required")
    for engine in engines:
        if engine not in ENGINES:
            raise ConfigError(f"unknown engine {engine!r}")
    resolved = resolve_scenario(config)
    traces = {engine: run_engine(resolved, engine) for engine in engines}

    ref_times = traces[engines[0]].times
    resampled: dict[str, np.ndarray] = {}
    for engine, trace in traces.items():
        if len(trace.times) == len(ref_times) and np.allclose(trace.times, ref_times, rtol=0, atol=1e-12):
            resampled[engine] = trace.amplitudes
        else:
            hi = min(float(ref_times[-1]), float(trace.times[-1]))
            mask = ref_times <= hi + 1e-12
            re = np.interp(ref_times[mask], trace.times, trace.amplitudes.real)
            im = np.interp(ref_times[mask], trace.times, trace.amplitudes.imag)
            full = np.full(len(ref_times), np.nan, dtype=complex)
            full[mask] = re + 1j * im
            resampled[engine] = full

    rows: list[tuple[str, str, float, float]] = []
    for i, ea in enumerate(engines):
        for eb in engines[i + 1:]:
            both = ~(np.isnan(resampled[ea]) | np.isnan(resampled[eb]))
            dev = np.abs(resampled[ea][both] - resampled[eb][both])
            rows.append((ea, eb, float(np.max(dev)), float(np.mean(dev))))

    if out_dir is not None:
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        write_rows_csv(
            directory / "compare.csv",
            ("engine_a", "engine_b", "max_abs_dev", "mean_abs_dev"),
            rows,
        )
    return rows


# --- parameter sweeps --------------------------------------------------------

SWEEP_PARAMETERS = ("z0", "omega_a", "gamma_tau1")


def sweep(
    config: ScenarioConfig,
    parameter: str,
    values: Sequence[float],
    out_dir: str | Path | None = None,
    render: bool = True,
) -> Path:
    """Run the scenario once per value and write an aggregate summary CSV.

    The summary maps each value to the golden-rule rate and the final
    excitation probability of that run.  An empty value list writes a
    header-only summary.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMETERS}")
    directory = Path(out_dir) if out_dir is not None else Path(config.out_dir)
    directory.mkdir(parents=True, exist_ok=True)

    rows = []
    rates = []
    for i, value in enumerate(values):
        if parameter == "z0":
            derived = replace(config, z0_mode=AbsoluteZ(float(value)))
        elif parameter == "omega_a":
            derived = replace(config, omega_mode=AbsoluteOmega(float(value)))
        else:
            if not isinstance(config.z0_mode, ByGammaTau):
                raise ConfigError("gamma_tau1 sweep requires a by_gamma_tau1 scenario")
            derived = replace(
                config, z0_mode=replace(config.z0_mode, gamma_tau1=float(value))
            )
        derived = replace(derived, trace_name=f"{config.trace_name}_{i:03d}")
        manifest = run_scenario(derived, out_dir=directory, render=render)
        resolved = resolve_scenario(derived)
        rate = golden_rule_rate(resolved.geom, resolved.atom).rate
        csv_path = directory / manifest.files[0]
        last = csv_path.read_text(encoding="utf-8").rstrip("\n").splitlines()[-1]
        final_prob = float(last.split(",")[4])
        rows.append((float(value), rate, final_prob))
        rates.append(rate)

    summary = directory / f"{config.trace_name}_sweep.csv"
    write_rows_csv(summary, ("value", "golden_rule_rate", "final_prob"), rows)
    if render and rows:
        render_sweep_figure(
            directory / f"{config.trace_name}_sweep.png",
            np.array([r[0] for r in rows]),
            np.array(rates),
            parameter,
        )
    return summary


# --- figure presets ----------------------------------------------------------


@dataclass(frozen=True)
class Preset:
    """Named bundle of scenarios reproducing one published-style figure."""

    name: str
    kind: str  # magnitude | probability
    members: tuple[tuple[str, ScenarioConfig], ...]


def _base(engine: str, omega: MidbandBetween, z0_mode, t_max: float, name: str, **kw) -> ScenarioConfig:
    return ScenarioConfig(
        a_over_b=2.0,
        omega_mode=omega,
        z0_mode=z0_mode,
        engine=engine,
        t_max_gamma=t_max,
        trace_name=name,
        **kw,
    )


def _phase_members(omega: MidbandBetween, gamma_tau1: float, t_max: float, tag: str):
    """Vacuum-limit reference plus the three standard round-trip phases."""
    phases = (("phase_pi_over_2", math.pi / 2), ("phase_pi", math.pi), ("phase_2pi", 2 * math.pi))
    members = [
        (
            "no_termination",
            _base(
                "dde",
                omega,
                ByGammaTau(gamma_tau1=4.0 * t_max, phase1=math.pi),
                t_max,
                f"{tag}_no_termination",
            ),
        )
    ]
    for label, phi in phases:
        members.append(
            (
                label,
                _base(
                    "dde",
                    omega,
                    ByGammaTau(gamma_tau1=gamma_tau1, phase1=phi),
                    t_max,
                    f"{tag}_{label}",
                ),
            )
        )
    return tuple(members)


def _build_presets() -> dict[str, Preset]:
    single = MidbandBetween(ModeIndex(1, 1), ModeIndex(3, 1))
    double = MidbandBetween(ModeIndex(3, 1), ModeIndex(5, 1))
    presets: dict[str, Preset] = {}

    presets["fig2a"] = Preset(
        "fig2a",
        "probability",
        tuple(
            (
                label,
                _base("markov", single, FractionOfLambda(frac), 5.0, f"fig2a_{label}"),
            )
            for label, frac in (
                ("z0_0", 0.0),
                ("z0_lambda_over_8", 0.125),
                ("z0_lambda_over_4", 0.25),
            )
        ),
    )
    presets["fig2b"] = Preset(
        "fig2b",
        "probability",
        (
            (
                "tm11_only",
                _base(
                    "markov",
                    double,
                    FractionOfLambda(0.25),
                    5.0,
                    "fig2b_tm11_only",
                    mode_filter=(ModeIndex(1, 1),),
                ),
            ),
            (
                "tm11_tm31",
                _base("markov", double, FractionOfLambda(0.25), 5.0, "fig2b_tm11_tm31"),
            ),
        ),
    )
    presets["fig3a"] = Preset("fig3a", "magnitude", _phase_members(single, 0.1, 10.0, "fig3a"))
    presets["fig3b"] = Preset("fig3b", "magnitude", _phase_members(single, 1.0, 10.0, "fig3b"))
    presets["fig4a"] = Preset("fig4a", "magnitude", _phase_members(double, 0.1, 10.0, "fig4a"))
    presets["fig4b"] = Preset("fig4b", "magnitude", _phase_members(double, 1.0, 10.0, "fig4b"))
    presets["fig5a"] = Preset(
        "fig5a", "probability", _phase_members(single, 10.0, 30.0, "fig5a")[1:]
    )
    presets["fig5b"] = Preset(
        "fig5b", "probability", _phase_members(double, 10.0, 30.0, "fig5b")[1:]
    )
    return presets


PRESETS = _build_presets()


def run_preset(name: str, out_dir: str | Path, render: bool = True) -> list[RunManifest]:
    """Run every member scenario of a preset and render one combined figure."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    preset = PRESETS[name]
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    manifests = []
    curves = []
    for label, config in preset.members:
        manifests.append(run_scenario(config, out_dir=directory, render=False))
        csv_path = directory / f"{config.trace_name}.csv"
        data = np.genfromtxt(csv_path, delimiter=",", names=True)
        curves.append((label, data["t_gamma"], data["re"] + 1j * data["im"]))
    if render:
        render_trace_figure(directory / f"{name}.png", curves, kind=preset.kind, title=name)
    return manifests
