"""Content-keyed disk cache for the full-scale runs the acceptance tests share.

A handful of acceptance checks read artifacts of long runs (minutes to hours
on one core).  Artifacts live under tests/.scenario_cache keyed by the
resolved configuration text plus a digest of the package sources, so any
change to either recomputes instead of serving stale CSVs.  Set
QCTUNNEL_TEST_CACHE=0 to bypass the cache entirely, or delete the cache
directory to force a rebuild.  tests/warm_cache.py populates everything
up front; a cold cache makes the first test session very slow but is
otherwise equivalent.
"""

from __future__ import annotations

import hashlib
import os
import shutil
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np

from qctunnel.runner import (
    ScenarioConfig,
    format_config,
    preset_config,
    run_scenario,
    run_sweep,
    verify_manifest,
)

TESTS_DIR = Path(__file__).resolve().parent
CACHE_DIR = TESTS_DIR / ".scenario_cache"
SRC_DIR = TESTS_DIR.parent / "src" / "qctunnel"


def cache_enabled() -> bool:
    return os.environ.get("QCTUNNEL_TEST_CACHE", "1") != "0"


def _source_digest() -> str:
    digest = hashlib.sha256()
    for path in sorted(SRC_DIR.glob("*.py")):
        digest.update(path.name.encode())
        digest.update(path.read_bytes())
    return digest.hexdigest()


def cache_key(cfg: ScenarioConfig, kind: str) -> str:
    # the output directory is the cache's business, not part of the identity
    canonical = replace(cfg, directory="cache")
    text = f"{kind}\n{format_config(canonical)}\nsrc {_source_digest()}\n"
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _verify_tree(directory: Path, kind: str) -> None:
    verify_manifest(directory)
    if kind == "sweep":
        members = [d for d in directory.iterdir() if d.is_dir()]
        if not members:
            raise FileNotFoundError(f"sweep cache {directory} has no member runs")
        for member in members:
            verify_manifest(member)


def _compute(cfg: ScenarioConfig, kind: str, directory: Path) -> None:
    if kind == "scenario":
        manifest = run_scenario(cfg, out_dir=directory)
    elif kind == "sweep":
        manifest = run_sweep(replace(cfg, directory=str(directory)))
    else:
        raise ValueError(f"unknown run kind {kind!r}")
    if not manifest.ok:
        raise RuntimeError(f"run for {directory} had failures: {manifest.failed}")


def materialize(cfg: ScenarioConfig, kind: str = "scenario") -> Path:
    """Return a directory holding finished, checksum-verified artifacts."""
    key = cache_key(cfg, kind)
    if not cache_enabled():
        fresh = Path(tempfile.mkdtemp(prefix=f"qctunnel-{key}-"))
        _compute(cfg, kind, fresh)
        return fresh
    final = CACHE_DIR / key
    if final.exists():
        try:
            _verify_tree(final, kind)
            return final
        except (FileNotFoundError, RuntimeError):
            shutil.rmtree(final)
    CACHE_DIR.mkdir(exist_ok=True)
    scratch = CACHE_DIR / f"{key}.tmp{os.getpid()}"
    if scratch.exists():
        shutil.rmtree(scratch)
    try:
        _compute(cfg, kind, scratch)
        os.replace(scratch, final)
    finally:
        if scratch.exists():
            shutil.rmtree(scratch)
    return final


def read_csv(path) -> np.ndarray:
    """Emitted CSV -> structured array keyed by the header names."""
    return np.genfromtxt(path, delimiter=",", names=True)


# --- the shared run registry --------------------------------------------------


def _with_params(cfg: ScenarioConfig, **model) -> ScenarioConfig:
    return replace(cfg, params=cfg.params.with_(**model))


def fig3_run() -> ScenarioConfig:
    return preset_config("fig3")


def fig3_low_gamma_run() -> ScenarioConfig:
    return _with_params(preset_config("fig3"), gamma=0.01)


def uncoupled_control_run() -> ScenarioConfig:
    # gamma=0 control on the fig3 grid; t=200 covers the oracle comparison
    return replace(_with_params(preset_config("fig3"), gamma=0.0), t_final=200.0)


def step_refinement_run(dt: float, sample_stride: int) -> ScenarioConfig:
    # short checkpointed runs whose final states quantify the stepping error
    return replace(
        preset_config("fig3"),
        t_final=10.0,
        dt=dt,
        sample_stride=sample_stride,
        classical_n=500,
        checkpoint=True,
    )


STEP_REFINEMENT = (
    ("coarse", 0.004, 125),
    ("mid", 0.002, 250),
    ("reference", 0.0005, 1000),
)


def resolution_run(doubled: bool) -> ScenarioConfig:
    cfg = replace(preset_config("fig3"), t_final=50.0, classical_n=500)
    if doubled:
        cfg = replace(cfg, n1=2 * cfg.n1, n2=2 * cfg.n2)
    return cfg


def gamma_sweep_run() -> ScenarioConfig:
    # moderated-mass sweep; CI-scale ensemble (the summary gap check is
    # statistical, and 2000 trajectories give a ~0.01 standard error)
    return replace(preset_config("fig2"), classical_n=2000)


def lambda2_sweep_run() -> ScenarioConfig:
    return preset_config("fig4")


def acceptance_runs():
    """Every cached run the test suite uses, cheapest first."""
    runs = {}
    for tag, dt, stride in STEP_REFINEMENT:
        runs[f"step_{tag}"] = (step_refinement_run(dt, stride), "scenario")
    runs["uncoupled_control"] = (uncoupled_control_run(), "scenario")
    runs["fig3"] = (fig3_run(), "scenario")
    runs["resolution_base"] = (resolution_run(False), "scenario")
    runs["resolution_doubled"] = (resolution_run(True), "scenario")
    runs["fig3_low_gamma"] = (fig3_low_gamma_run(), "scenario")
    runs["gamma_sweep"] = (gamma_sweep_run(), "sweep")
    runs["lambda2_sweep"] = (lambda2_sweep_run(), "sweep")
    return runs
