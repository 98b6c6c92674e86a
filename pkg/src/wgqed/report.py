"""Delimited output and figure rendering for scenario runs.

CSV files are the canonical, byte-reproducible artifact: UTF-8, LF line
endings, floats as shortest round-trip decimals.  Figures are rendered next
to them as a convenience and carry no reproducibility guarantee.
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

TRACE_HEADER = "t_gamma,re,im,abs,prob"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_trace_csv(path: Path, t_gamma: np.ndarray, amplitudes: np.ndarray) -> None:
    """Write one amplitude trace: header plus one row per grid point."""
    lines = [TRACE_HEADER]
    for t, z in zip(t_gamma, amplitudes):
        mag = abs(complex(z))
        lines.append(
            ",".join((_fmt(t), _fmt(z.real), _fmt(z.imag), _fmt(mag), _fmt(mag * mag)))
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_rows_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Generic small-table writer with the same float formatting rules."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_kv_text(path: Path, mapping: Mapping[str, str]) -> None:
    """Flat key-value text, one `key = value` per line, keys in insertion order."""
    lines = [f"{k} = {v}" for k, v in mapping.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def sha256_of(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def render_trace_figure(
    path: Path,
    curves: Sequence[tuple[str, np.ndarray, np.ndarray]],
    kind: str = "magnitude",
    title: str | None = None,
) -> None:
    """Plot labeled amplitude curves against scaled time and save to file.

    ``curves`` holds (label, t_gamma, complex amplitudes) triples; ``kind``
    selects |amplitude| or excitation probability on the y axis.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, t_gamma, amps in curves:
        y = np.abs(amps) ** 2 if kind == "probability" else np.abs(amps)
        ax.plot(t_gamma, y, label=label)
    ax.set_xlabel(r"$\Gamma t$")
    ax.set_ylabel("excitation probability" if kind == "probability" else "|amplitude|")
    ax.set_ylim(bottom=0.0)
    if title:
        ax.set_title(title)
    if len(curves) > 1:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_figure(path: Path, values: np.ndarray, rates: np.ndarray, xlabel: str) -> None:
    """Golden-rule rate against the swept parameter."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(values, rates, marker="o")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("golden-rule rate")
    ax.set_ylim(bottom=0.0)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
