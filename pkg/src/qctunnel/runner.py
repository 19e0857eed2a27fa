"""Scenario configuration, presets, sweeps and CSV artifacts.

A scenario is one quantum run plus its matched classical ensemble, written
out as three CSVs (time series, classical series, autocorrelation spectrum),
a resolved-config echo that parses back to the identical configuration, and
a manifest with sha-256 checksums.  Sweeps repeat a scenario over gamma or
lambda2 values and add a summary CSV of cycle statistics per value.

Config files are flat sectioned `key = value` text; unknown keys are
rejected with the offending key and line number.  All floats are emitted
with 17 significant digits so the echo round-trips bit-exactly.
"""

from __future__ import annotations

import copy
import hashlib
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .classical import WignerGaussian, propagate_ensemble, sample_ensemble
from .observables import cycle_stats, spectral_density
from .potentials import PacketSpec, PotentialParams, packet_for_well
from .quantum import Grid2D, init_product_gaussian, make_grid, propagate, save_state

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "RunManifest",
    "PRESETS",
    "parse_config",
    "format_config",
    "preset_config",
    "paper_mass_overrides",
    "run_scenario",
    "run_sweep",
    "verify_manifest",
]

log = logging.getLogger(__name__)

VERSION = "0.1.0"


class ConfigError(ValueError):
    """Configuration text or values rejected; message names the culprit."""


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    items = [s for s in (p.strip() for p in text.split(",")) if s]
    if not items:
        raise ValueError("empty value list")
    return tuple(float(s) for s in items)


# section -> key -> caster applied to the raw string
SCHEMA = {
    "model": {key: float for key in (
        "m1", "m2", "k1", "k2", "lambda1", "lambda2", "a1", "a2", "gamma", "l0", "hbar")},
    "packets": {"side1": str, "side2": str, "alpha1": float, "alpha2": float},
    "grid": {"n1": int, "n2": int, "L1": float, "L2": float},
    "time": {"dt": float, "t_final": float, "sample_stride": int},
    "classical": {"n": int, "dt": float, "seed": int, "ring": _bool},
    "spectrum": {"window": str, "pad": int},
    "output": {"directory": str, "basename": str, "checkpoint": _bool},
    "sweep": {"parameter": str, "values": _float_list},
}

DEFAULTS = {
    "model": {"m1": 1.0, "m2": 1.0, "k1": 0.5, "k2": 0.5, "lambda1": 3.0,
              "lambda2": 3.0, "a1": 1.0, "a2": 1.0, "gamma": 0.0, "l0": 0.5, "hbar": 1.0},
    "packets": {"side1": "right", "side2": "left", "alpha1": 3.0, "alpha2": 3.0},
    "grid": {"n1": 256, "n2": 512, "L1": 10.0, "L2": 12.0},
    "time": {"dt": 0.002, "t_final": 400.0, "sample_stride": 250},
    "classical": {"n": 20000, "dt": 0.001, "seed": 2, "ring": False},
    "spectrum": {"window": "hann", "pad": 4},
    "output": {"directory": "out", "basename": "run", "checkpoint": False},
    "sweep": {},
}

# preset -> (description, overrides by section)
PRESETS = {
    "fig1": (
        "tunneling-rate time series, light probe m2=0.01, gamma sweep",
        {"model": {"m2": 0.01, "gamma": 0.01},
         "grid": {"n2": 2048, "L2": 24.0},
         "time": {"t_final": 200.0},
         "sweep": {"parameter": "gamma", "values": (0.01, 0.02, 0.05, 0.1, 0.2)}},
    ),
    "fig2": (
        "rate statistics vs coupling, light probe m2=0.01, 3-point gamma sweep",
        {"model": {"m2": 0.01, "gamma": 0.01},
         "grid": {"n2": 2048, "L2": 24.0},
         "time": {"t_final": 200.0},
         "sweep": {"parameter": "gamma", "values": (0.01, 0.05, 0.2)}},
    ),
    "fig3": (
        "equal masses, stiff probe well lambda2=15, gamma=0.1, t=400",
        {"model": {"lambda2": 15.0, "gamma": 0.1}},
    ),
    "fig4": (
        "fig3 regime swept over probe barrier height lambda2",
        {"model": {"lambda2": 15.0, "gamma": 0.1},
         "sweep": {"parameter": "lambda2", "values": (3.0, 15.0, 60.0)}},
    ),
}

# stretch mode: the literal light-probe mass at its grid/step cost
PAPER_MASS = {
    "model": {"m2": 1e-4},
    "grid": {"n2": 8192, "L2": 48.0},
    "time": {"dt": 5e-4, "sample_stride": 1000},
    "classical": {"dt": 1e-4},
}


@dataclass
class ScenarioConfig:
    """Fully resolved scenario: physics, grid, schedules, outputs, sweep."""

    params: PotentialParams
    side1: str = "right"
    side2: str = "left"
    alpha1: float = 3.0
    alpha2: float = 3.0
    n1: int = 256
    n2: int = 512
    L1: float = 10.0
    L2: float = 12.0
    dt: float = 0.002
    t_final: float = 400.0
    sample_stride: int = 250
    classical_n: int = 20000
    classical_dt: float = 0.001
    seed: int = 2
    ring: bool = False
    window: str = "hann"
    pad: int = 4
    directory: str = "out"
    basename: str = "run"
    checkpoint: bool = False
    sweep_parameter: str | None = None
    sweep_values: tuple[float, ...] = ()

    @property
    def nsteps(self) -> int:
        return int(round(self.t_final / self.dt))

    @property
    def sample_every(self) -> float:
        return self.sample_stride * self.dt

    @property
    def classical_stride(self) -> int:
        return int(round(self.sample_every / self.classical_dt))

    def packet_specs(self) -> tuple[PacketSpec, PacketSpec]:
        return (
            packet_for_well(self.params, 1, self.side1, self.alpha1),
            packet_for_well(self.params, 2, self.side2, self.alpha2),
        )

    def grid(self) -> Grid2D:
        return make_grid(self.n1, self.n2, self.L1, self.L2, hbar=self.params.hbar)

    def validate(self) -> None:
        for side, label in ((self.side1, "side1"), (self.side2, "side2")):
            if side not in ("left", "right"):
                raise ConfigError(f"{label} must be 'left' or 'right', got {side!r}")
        if self.alpha1 <= 0 or self.alpha2 <= 0:
            raise ConfigError("packet alphas must be positive")
        if self.dt <= 0:
            raise ConfigError("time.dt must be positive")
        if self.t_final <= 0:
            raise ConfigError("time.t_final must be positive")
        if self.t_final / self.dt >= 1e9:
            raise ConfigError("t_final/dt must stay below 1e9 steps")
        if self.sample_stride < 1:
            raise ConfigError("time.sample_stride must be >= 1")
        if self.nsteps < 1:
            raise ConfigError("t_final is shorter than one step")
        if self.nsteps % self.sample_stride:
            raise ConfigError(
                f"sample_stride {self.sample_stride} must divide the "
                f"{self.nsteps} steps for uniform sampling"
            )
        if self.nsteps // self.sample_stride + 1 < 16:
            raise ConfigError(
                f"schedule yields only {self.nsteps // self.sample_stride + 1} samples; "
                "the spectrum needs at least 16 (lengthen t_final or shrink sample_stride)"
            )
        if self.classical_n < 1:
            raise ConfigError("classical.n must be >= 1")
        if self.classical_dt <= 0:
            raise ConfigError("classical.dt must be positive")
        ratio = self.sample_every / self.classical_dt
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ConfigError(
                f"classical.dt {self.classical_dt:g} must divide the sample "
                f"interval {self.sample_every:g}"
            )
        if self.seed < 0:
            raise ConfigError("classical.seed must be non-negative")
        if self.window not in ("hann", "rect"):
            raise ConfigError(f"spectrum.window must be 'hann' or 'rect', got {self.window!r}")
        if self.pad < 1:
            raise ConfigError("spectrum.pad must be >= 1")
        if self.sweep_parameter is not None:
            if self.sweep_parameter not in ("gamma", "lambda2"):
                raise ConfigError(
                    f"sweep.parameter must be 'gamma' or 'lambda2', got {self.sweep_parameter!r}"
                )
            if not self.sweep_values:
                raise ConfigError("sweep.values must be a non-empty list")
        try:
            self.grid()
            self.packet_specs()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def _sections_to_config(sec: dict) -> ScenarioConfig:
    model, packets, grid = sec["model"], sec["packets"], sec["grid"]
    tsec, csec, ssec, osec = sec["time"], sec["classical"], sec["spectrum"], sec["output"]
    sweep = sec.get("sweep", {})
    try:
        params = PotentialParams(**model)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return ScenarioConfig(
        params=params,
        side1=packets["side1"], side2=packets["side2"],
        alpha1=packets["alpha1"], alpha2=packets["alpha2"],
        n1=grid["n1"], n2=grid["n2"], L1=grid["L1"], L2=grid["L2"],
        dt=tsec["dt"], t_final=tsec["t_final"], sample_stride=tsec["sample_stride"],
        classical_n=csec["n"], classical_dt=csec["dt"], seed=csec["seed"], ring=csec["ring"],
        window=ssec["window"], pad=ssec["pad"],
        directory=osec["directory"], basename=osec["basename"], checkpoint=osec["checkpoint"],
        sweep_parameter=sweep.get("parameter"), sweep_values=tuple(sweep.get("values", ())),
    )


def _parse_sections(text: str) -> dict:
    """Raw text -> {section: {key: typed value}}, strict about every token."""
    out: dict[str, dict] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise ConfigError(f"unknown section [{section}] at line {lineno}")
            out.setdefault(section, {})
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value' at line {lineno}: {raw.strip()!r}")
        if section is None:
            raise ConfigError(f"key outside any [section] at line {lineno}")
        key, value = (part.strip() for part in line.split("=", 1))
        schema = SCHEMA[section]
        if key not in schema:
            raise ConfigError(f"unknown key '{key}' in [{section}] at line {lineno}")
        try:
            out[section][key] = schema[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for '{key}' at line {lineno}: {exc}") from exc
    return out


def parse_config(text: str) -> ScenarioConfig:
    """Parse config text over the defaults; returns a validated config."""
    merged = copy.deepcopy(DEFAULTS)
    for section, pairs in _parse_sections(text).items():
        merged[section].update(pairs)
    if set(merged["sweep"]) == {"parameter"} or set(merged["sweep"]) == {"values"}:
        raise ConfigError("[sweep] needs both 'parameter' and 'values'")
    cfg = _sections_to_config(merged)
    cfg.validate()
    return cfg


def _value_str(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, tuple):
        return ", ".join(f"{v:.17g}" for v in value)
    return str(value)


def format_config(cfg: ScenarioConfig) -> str:
    """Canonical text form; parse_config(format_config(cfg)) == cfg."""
    p = cfg.params
    sections = {
        "model": {"m1": p.m1, "m2": p.m2, "k1": p.k1, "k2": p.k2, "lambda1": p.lambda1,
                  "lambda2": p.lambda2, "a1": p.a1, "a2": p.a2, "gamma": p.gamma,
                  "l0": p.l0, "hbar": p.hbar},
        "packets": {"side1": cfg.side1, "side2": cfg.side2,
                    "alpha1": cfg.alpha1, "alpha2": cfg.alpha2},
        "grid": {"n1": cfg.n1, "n2": cfg.n2, "L1": cfg.L1, "L2": cfg.L2},
        "time": {"dt": cfg.dt, "t_final": cfg.t_final, "sample_stride": cfg.sample_stride},
        "classical": {"n": cfg.classical_n, "dt": cfg.classical_dt,
                      "seed": cfg.seed, "ring": cfg.ring},
        "spectrum": {"window": cfg.window, "pad": cfg.pad},
        "output": {"directory": cfg.directory, "basename": cfg.basename,
                   "checkpoint": cfg.checkpoint},
    }
    if cfg.sweep_parameter is not None:
        sections["sweep"] = {"parameter": cfg.sweep_parameter, "values": cfg.sweep_values}
    lines = []
    for name, pairs in sections.items():
        lines.append(f"[{name}]")
        lines.extend(f"{key} = {_value_str(value)}" for key, value in pairs.items())
        lines.append("")
    return "\n".join(lines)


def _apply_overrides(merged: dict, overrides: dict) -> None:
    for section, pairs in overrides.items():
        merged[section].update(pairs)


def preset_config(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    merged = copy.deepcopy(DEFAULTS)
    _apply_overrides(merged, PRESETS[name][1])
    cfg = _sections_to_config(merged)
    cfg.validate()
    return cfg


def paper_mass_overrides(cfg: ScenarioConfig) -> ScenarioConfig:
    """Apply the literal light-probe stretch settings on top of cfg."""
    new = replace(
        cfg,
        params=cfg.params.with_(m2=PAPER_MASS["model"]["m2"]),
        n2=PAPER_MASS["grid"]["n2"],
        L2=PAPER_MASS["grid"]["L2"],
        dt=PAPER_MASS["time"]["dt"],
        sample_stride=PAPER_MASS["time"]["sample_stride"],
        classical_dt=PAPER_MASS["classical"]["dt"],
    )
    new.validate()
    return new


# --- artifacts ---------------------------------------------------------------


@dataclass
class RunManifest:
    """What a run produced: resolved config, checksums, wall time."""

    directory: str
    version: str = VERSION
    wall_time_s: float = 0.0
    files: dict = field(default_factory=dict)      # name -> sha256 hex
    config_text: str = ""
    failed: tuple = ()                             # sweep members that aborted

    @property
    def ok(self) -> bool:
        return not self.failed


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _f(x) -> str:
    return f"{float(x):.17g}"


def _write_manifest(cfg: ScenarioConfig, directory: Path, names: list[str],
                    wall: float, failed: tuple = ()) -> RunManifest:
    files = {name: _sha256(directory / name) for name in names}
    lines = [f"version: {VERSION}", f"wall_time_s: {wall:.3f}",
             f"files: {' '.join(names)}"]
    lines.extend(f"sha256 {name}: {digest}" for name, digest in files.items())
    lines.extend(f"failed: {item}" for item in failed)
    _write_text(directory / f"{cfg.basename}_manifest.txt", "\n".join(lines) + "\n")
    for name, digest in files.items():
        if _sha256(directory / name) != digest:
            raise RuntimeError(f"checksum verification failed for {name}")
    return RunManifest(directory=str(directory), wall_time_s=wall, files=files,
                       config_text=format_config(cfg), failed=failed)


def verify_manifest(directory) -> None:
    """Re-hash every file listed in the manifest; raises on any mismatch."""
    directory = Path(directory)
    manifests = sorted(directory.glob("*_manifest.txt"))
    if not manifests:
        raise FileNotFoundError(f"no manifest in {directory}")
    for manifest in manifests:
        for line in manifest.read_text().splitlines():
            if line.startswith("sha256 "):
                name, digest = line[len("sha256 "):].split(": ")
                actual = _sha256(directory / name)
                if actual != digest:
                    raise RuntimeError(
                        f"checksum mismatch for {name}: manifest {digest}, file {actual}"
                    )


def run_scenario(cfg: ScenarioConfig, out_dir=None) -> RunManifest:
    """One quantum run + classical ensemble + spectrum, written as CSVs.

    Everything is computed before any file is written, so an abort leaves
    no partial artifacts behind.
    """
    cfg.validate()
    if out_dir is not None:
        cfg = replace(cfg, directory=str(out_dir))
    start = time.perf_counter()
    spec1, spec2 = cfg.packet_specs()
    psi = init_product_gaussian(cfg.grid(), spec1, spec2)
    log.info("quantum run: %d x %d grid, %d steps", cfg.n1, cfg.n2, cfg.nsteps)
    series = propagate(psi, cfg.params, cfg.t_final, cfg.dt, cfg.sample_stride)
    log.info("classical ensemble: n=%d, %d steps", cfg.classical_n,
             int(round(cfg.t_final / cfg.classical_dt)))
    ensemble = sample_ensemble(
        cfg.classical_n, WignerGaussian.from_packet(spec1),
        WignerGaussian.from_packet(spec2), seed=cfg.seed,
    )
    cseries = propagate_ensemble(
        ensemble, cfg.params, cfg.t_final, cfg.classical_dt, cfg.classical_stride,
        ring_circumference=2.0 * cfg.L2 if cfg.ring else None,
    )
    spectrum = spectral_density(
        series.autocorrelation, cfg.sample_every, window=cfg.window,
        pad=cfg.pad, hbar=cfg.params.hbar,
    )

    directory = Path(cfg.directory)
    directory.mkdir(parents=True, exist_ok=True)
    base = cfg.basename
    quantum_rows = (
        (_f(t), _f(n), _f(e), _f(tr), _f(s), _f(c.real), _f(c.imag))
        for t, n, e, tr, s, c in zip(
            series.times, series.norm, series.energy, series.tunneling,
            series.entropy, series.autocorrelation)
    )
    _write_text(directory / f"{base}_quantum.csv", _csv_text(
        ("t", "norm", "energy", "T_r", "S", "re_C", "im_C"), quantum_rows))
    classical_rows = (
        (_f(t), _f(tr), str(cfg.classical_n))
        for t, tr in zip(cseries.times, cseries.tunneling)
    )
    _write_text(directory / f"{base}_classical.csv", _csv_text(
        ("t", "T_r_classical", "N_effective"), classical_rows))
    spectrum_rows = ((_f(e), _f(r)) for e, r in zip(spectrum.energies, spectrum.rho))
    _write_text(directory / f"{base}_spectrum.csv", _csv_text(("E", "rho_E"), spectrum_rows))
    _write_text(directory / f"{base}_resolved.cfg", format_config(cfg))
    names = [f"{base}_quantum.csv", f"{base}_classical.csv",
             f"{base}_spectrum.csv", f"{base}_resolved.cfg"]
    if cfg.checkpoint:
        save_state(psi, directory / f"{base}_state.qck")
        names.append(f"{base}_state.qck")
    wall = time.perf_counter() - start
    manifest = _write_manifest(cfg, directory, names, wall)
    log.info("scenario done in %.1fs -> %s", wall, directory)
    return manifest


def _sweep_member_config(cfg: ScenarioConfig, value: float) -> ScenarioConfig:
    param = cfg.sweep_parameter
    member_dir = str(Path(cfg.directory) / f"{param}={value:g}")
    return replace(
        cfg,
        params=cfg.params.with_(**{param: value}),
        directory=member_dir,
        sweep_parameter=None,
        sweep_values=(),
    )


def _run_member(cfg: ScenarioConfig) -> tuple:
    """Run one sweep member; returns its T_r cycle statistics.

    Statistics are recomputed from the member's emitted CSVs (17 significant
    digits round-trip exactly), so the summary reflects the artifacts.
    """
    run_scenario(cfg)
    quantum = np.loadtxt(
        Path(cfg.directory) / f"{cfg.basename}_quantum.csv", delimiter=",", skiprows=1)
    classical = np.loadtxt(
        Path(cfg.directory) / f"{cfg.basename}_classical.csv", delimiter=",", skiprows=1)
    qs = cycle_stats(quantum[:, 0], quantum[:, 3])
    cs = cycle_stats(classical[:, 0], classical[:, 1])
    return (qs.mean, qs.cycle_max, qs.cycle_min, cs.mean, cs.cycle_max, cs.cycle_min)


def run_sweep(cfg: ScenarioConfig, workers: int = 1) -> RunManifest:
    """Run every sweep member, then write the summary CSV in input order.

    A member that aborts numerically is recorded as a nan row and the sweep
    continues; the manifest lists the failures.
    """
    cfg.validate()
    if cfg.sweep_parameter is None:
        raise ConfigError("config has no [sweep] section")
    start = time.perf_counter()
    members = [_sweep_member_config(cfg, value) for value in cfg.sweep_values]
    stats: list[tuple | None] = [None] * len(members)
    failures = []
    if workers <= 1 or len(members) == 1:
        for i, member in enumerate(members):
            try:
                stats[i] = _run_member(member)
            except (RuntimeError, ValueError) as exc:
                failures.append(f"{cfg.sweep_parameter}={cfg.sweep_values[i]:g}: {exc}")
                log.error("sweep member %s failed: %s", member.directory, exc)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_member, member) for member in members]
            for i, future in enumerate(futures):
                try:
                    stats[i] = future.result()
                except (RuntimeError, ValueError) as exc:
                    failures.append(f"{cfg.sweep_parameter}={cfg.sweep_values[i]:g}: {exc}")
                    log.error("sweep member %s failed: %s", members[i].directory, exc)

    directory = Path(cfg.directory)
    directory.mkdir(parents=True, exist_ok=True)
    rows = []
    for value, row in zip(cfg.sweep_values, stats):
        numbers = row if row is not None else (float("nan"),) * 6
        rows.append((_f(value),) + tuple(_f(x) for x in numbers))
    base = cfg.basename
    _write_text(directory / f"{base}_summary.csv", _csv_text(
        ("value", "q_mean", "q_cycle_max", "q_cycle_min",
         "c_mean", "c_cycle_max", "c_cycle_min"), rows))
    _write_text(directory / f"{base}_resolved.cfg", format_config(cfg))
    wall = time.perf_counter() - start
    manifest = _write_manifest(
        cfg, directory, [f"{base}_summary.csv", f"{base}_resolved.cfg"],
        wall, failed=tuple(failures))
    log.info("sweep done in %.1fs, %d/%d members ok", wall,
             len(members) - len(failures), len(members))
    return manifest
