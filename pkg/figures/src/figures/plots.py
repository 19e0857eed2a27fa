"""The three renderers for the CLI: timeseries, sweep, spectrum.

Output is SVG with a pinned hash salt and no timestamp metadata, so a given
set of CSVs always renders to byte-identical files.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from . import style  # noqa: E402
from .schemas import SchemaError, load_csv, matching_time_axes  # noqa: E402

__all__ = ["FigureRequest", "render"]

plt.rcParams["svg.hashsalt"] = "figures"

KINDS = ("timeseries", "sweep", "spectrum")


@dataclass(frozen=True)
class FigureRequest:
    """One figure to render: inputs, output path, and layout options."""

    kind: str
    inputs: tuple
    output: Path
    classical: tuple = ()
    gammas: tuple = ()           # labels parallel to inputs; optional
    layout: str = "overlay"      # timeseries: overlay | panels
    log_x: bool = False
    x_label: str = "gamma"
    inset: Path | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")
        if self.layout not in ("overlay", "panels"):
            raise SchemaError(f"layout must be 'overlay' or 'panels', got {self.layout!r}")
        if self.gammas and len(self.gammas) != len(self.inputs):
            raise SchemaError(
                f"{len(self.gammas)} gamma labels for {len(self.inputs)} inputs; "
                "they pair up one to one"
            )
        for path in (*self.inputs, *self.classical, *((self.inset,) if self.inset else ())):
            if not Path(path).exists():
                raise SchemaError(f"input file does not exist: {path}")


def render(request: FigureRequest) -> Path:
    """Render one request; returns the written path."""
    if request.kind == "timeseries":
        fig = _timeseries(request)
    elif request.kind == "sweep":
        fig = _sweep(request)
    else:
        fig = _spectrum(request)
    out = Path(request.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)
    return out


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _curve_label(request, i: int) -> str:
    if request.gammas:
        return f"gamma={request.gammas[i]:g}"
    return Path(request.inputs[i]).stem


def _timeseries(request: FigureRequest):
    quantum = [load_csv(path, "quantum") for path in request.inputs]
    classical = [load_csv(path, "classical") for path in request.classical]
    paths = list(request.inputs) + list(request.classical)
    t = matching_time_axes(quantum + classical, paths)

    # draw in ascending coupling order so stacked curves read bottom-to-top
    order = range(len(quantum))
    if request.gammas:
        order = sorted(order, key=lambda i: request.gammas[i])

    if request.layout == "overlay":
        fig, (ax_rate, ax_entropy) = plt.subplots(2, 1, figsize=(6.4, 6.4), sharex=True)
        for i in order:
            gamma = request.gammas[i] if request.gammas else None
            line_style = style.style_for_gamma(gamma)
            ax_rate.plot(t, quantum[i]["T_r"], label=_curve_label(request, i), **line_style)
            ax_entropy.plot(t, quantum[i]["S"], label=_curve_label(request, i), **line_style)
        for i, series in enumerate(classical):
            label = "classical" if i == 0 else None
            ax_rate.plot(t, series["T_r_classical"], label=label, **style.CLASSICAL_THIN)
        ax_rate.set_ylabel("T_r")
        ax_rate.legend(loc="upper right", fontsize="small")
        ax_entropy.set_ylabel("S")
        ax_entropy.set_xlabel("t")
        ax_entropy.legend(loc="upper right", fontsize="small")
        fig.tight_layout()
        return fig

    # one panel per coupling: quantum solid against its classical dashed
    if classical and len(classical) not in (1, len(quantum)):
        raise SchemaError(
            f"{len(classical)} classical inputs for {len(quantum)} quantum inputs; "
            "give one per curve or one shared"
        )
    n = len(quantum)
    fig, axes = plt.subplots(n, 1, figsize=(6.4, 2.4 * n), sharex=True, squeeze=False)
    for row, i in enumerate(order):
        ax = axes[row, 0]
        ax.plot(t, quantum[i]["T_r"], label="quantum", **style.QUANTUM_SOLID)
        if classical:
            series = classical[i if len(classical) == n else 0]
            ax.plot(t, series["T_r_classical"], label="classical", **style.CLASSICAL_DASHED)
        ax.set_ylabel("T_r")
        ax.annotate(_curve_label(request, i), xy=(0.02, 0.85), xycoords="axes fraction")
        if row == 0:
            ax.legend(loc="upper right", fontsize="small")
    axes[-1, 0].set_xlabel("t")
    fig.tight_layout()
    return fig


def _sweep(request: FigureRequest):
    summary = load_csv(request.inputs[0], "summary")
    finite = np.isfinite(summary["q_mean"]) & np.isfinite(summary["c_mean"])
    for value in summary["value"][~finite]:
        _warn(f"value={value:g} has nan statistics (failed run); point skipped")
    rows = summary[finite]

    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    open_marker = {"markerfacecolor": "none", "color": "black", "linestyle": "none",
                   "markersize": 7}
    for column in ("q_mean", "c_mean"):
        spec = style.SWEEP_MARKERS[column]
        ax.plot(rows["value"], rows[column], marker=spec["marker"],
                label=spec["label"], **open_marker)

    # a degenerate cycle collapses both extrema onto the mean; triangles
    # would only restate the circle, so they are dropped with a warning
    degenerate = rows["q_cycle_max"] <= rows["q_cycle_min"]
    for value in rows["value"][degenerate]:
        _warn(f"value={value:g} has a degenerate cycle; max/min triangles omitted")
    cycles = rows[~degenerate]
    for column in ("q_cycle_max", "q_cycle_min"):
        spec = style.SWEEP_MARKERS[column]
        ax.plot(cycles["value"], cycles[column], marker=spec["marker"],
                label=spec["label"], **open_marker)

    if request.log_x:
        ax.set_xscale("log")
    ax.set_xlabel(request.x_label)
    ax.set_ylabel("T_r")
    ax.legend(loc="best", fontsize="small")

    if request.inset is not None:
        spectrum = load_csv(request.inset, "spectrum")
        inset = ax.inset_axes([0.58, 0.55, 0.38, 0.4])
        inset.plot(spectrum["E"], spectrum["rho_E"], linewidth=0.8, color="black")
        inset.set_xlabel("E", fontsize="small")
        inset.set_ylabel("rho_E", fontsize="small")
        inset.tick_params(labelsize="x-small")

    fig.tight_layout()
    return fig


def _spectrum(request: FigureRequest):
    spectrum = load_csv(request.inputs[0], "spectrum")
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(spectrum["E"], spectrum["rho_E"], linewidth=1.2, color="black")
    ax.set_xlabel("E")
    ax.set_ylabel("rho_E")
    if float(spectrum["rho_E"].max()) <= 0.0:
        ax.set_ylim(0.0, 1.0)  # flat axis for an empty spectrum, not a crash
    fig.tight_layout()
    return fig
