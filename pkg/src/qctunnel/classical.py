"""Classical trajectory ensemble matched to the initial quantum state.

The initial product Gaussian has a positive Wigner function, so the exact
quantum phase-space distribution at t = 0 is an honest classical probability
density: independent normals in each (x_i, p_i) with widths

    sigma_x = sqrt(hbar / (2 alpha)),   sigma_p = sqrt(alpha hbar / 2).

Trajectories follow Hamilton's equations under the same potential via
velocity Verlet (symplectic, second order).  Each trajectory draws from its
own counter-based stream keyed by (seed, index), so trajectory i is
identical no matter the ensemble size or slicing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .potentials import PacketSpec, PotentialParams, total_force, total_potential

__all__ = [
    "WignerGaussian",
    "Ensemble",
    "ClassicalSeries",
    "TrajectoryError",
    "wigner_widths",
    "sample_ensemble",
    "verlet_step",
    "propagate_ensemble",
    "ensemble_energy",
]


class TrajectoryError(RuntimeError):
    """Raised when trajectories blow up (non-finite phase-space values)."""


def wigner_widths(alpha: float, hbar: float = 1.0) -> tuple[float, float]:
    """(sigma_x, sigma_p) of the Wigner function of a width-alpha packet.

    The product is hbar/2: the packet is minimum-uncertainty, and this is
    the only Gaussian phase-space density reproducing both marginals.
    """
    if alpha <= 0 or hbar <= 0:
        raise ValueError("alpha and hbar must be positive")
    return math.sqrt(hbar / (2.0 * alpha)), math.sqrt(alpha * hbar / 2.0)


@dataclass(frozen=True)
class WignerGaussian:
    """Uncorrelated Gaussian phase-space density for one particle."""

    x0: float
    p0: float
    sigma_x: float
    sigma_p: float

    @classmethod
    def from_packet(cls, spec: PacketSpec) -> "WignerGaussian":
        sx, sp = wigner_widths(spec.alpha, spec.hbar)
        return cls(x0=spec.x0, p0=spec.p0, sigma_x=sx, sigma_p=sp)


@dataclass
class Ensemble:
    """Phase-space samples of both particles plus the seed that made them."""

    x1: np.ndarray
    p1: np.ndarray
    x2: np.ndarray
    p2: np.ndarray
    seed: int = 0

    @property
    def n(self) -> int:
        return self.x1.shape[0]

    def copy(self) -> "Ensemble":
        return Ensemble(
            self.x1.copy(), self.p1.copy(), self.x2.copy(), self.p2.copy(), self.seed
        )


def sample_ensemble(n: int, wig1: WignerGaussian, wig2: WignerGaussian, seed: int = 0) -> Ensemble:
    """Draw n independent trajectories from the two Wigner Gaussians.

    Trajectory i consumes exactly four normals from the counter-based
    stream keyed (seed, i): z -> (x1, p1, x2, p2) in that order.
    """
    n = int(n)
    if n < 1:
        raise ValueError("ensemble size must be >= 1")
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be non-negative")
    z = np.empty((n, 4))
    for i in range(n):
        z[i] = np.random.Generator(np.random.Philox(key=[seed, i])).standard_normal(4)
    return Ensemble(
        x1=wig1.x0 + wig1.sigma_x * z[:, 0],
        p1=wig1.p0 + wig1.sigma_p * z[:, 1],
        x2=wig2.x0 + wig2.sigma_x * z[:, 2],
        p2=wig2.p0 + wig2.sigma_p * z[:, 3],
        seed=seed,
    )


def verlet_step(x1, p1, x2, p2, dt: float, params: PotentialParams):
    """One velocity-Verlet step; pure, returns (x1, p1, x2, p2) at t + dt."""
    f1, f2 = total_force(x1, x2, params)
    p1 = p1 + 0.5 * dt * f1
    p2 = p2 + 0.5 * dt * f2
    x1 = x1 + dt * p1 / params.m1
    x2 = x2 + dt * p2 / params.m2
    f1, f2 = total_force(x1, x2, params)
    return x1, p1 + 0.5 * dt * f1, x2, p2 + 0.5 * dt * f2


def ensemble_energy(ens: Ensemble, params: PotentialParams) -> np.ndarray:
    """Per-trajectory total energy."""
    return (
        ens.p1**2 / (2.0 * params.m1)
        + ens.p2**2 / (2.0 * params.m2)
        + total_potential(ens.x1, ens.x2, params)
    )


@dataclass
class ClassicalSeries:
    """Sampled ensemble observables along the propagation."""

    times: np.ndarray
    tunneling: np.ndarray          # fraction of trajectories with x1 < 0
    energy_drift: np.ndarray      # max_i |E_i(t) - E_i(0)| at each sample
    n: int
    seed: int = 0
    left_counts: np.ndarray = field(default=None, repr=False)


def propagate_ensemble(
    ens: Ensemble,
    params: PotentialParams,
    t_final: float,
    dt: float,
    sample_stride: int = 1,
    ring_circumference: float | None = None,
) -> ClassicalSeries:
    """Velocity-Verlet evolution of the whole ensemble, sampled every stride.

    Mutates `ens` to the final state.  The left-side fraction counts
    trajectories with x1 < 0 (an integer count divided by n, so the series
    is exactly reproducible).  When ring_circumference is given, x2 is
    wrapped into [-C/2, C/2) after every position update; by default
    particle 2 moves on the unwrapped line, which matches the grid dynamics
    as long as nothing winds around the ring.
    """
    if t_final <= 0 or dt <= 0:
        raise ValueError("t_final and dt must be positive")
    sample_stride = int(sample_stride)
    if sample_stride < 1:
        raise ValueError("sample_stride must be >= 1")
    if ring_circumference is not None and ring_circumference <= 0:
        raise ValueError("ring_circumference must be positive")

    nsteps = int(round(t_final / dt))
    if nsteps < 1:
        raise ValueError("t_final shorter than one step")
    half = None if ring_circumference is None else 0.5 * ring_circumference

    x1, p1, x2, p2 = ens.x1, ens.p1, ens.x2, ens.p2
    e0 = ensemble_energy(ens, params)
    times = [0.0]
    counts = [int(np.count_nonzero(x1 < 0.0))]
    drift = [0.0]

    def record(step: int):
        if not (np.isfinite(x1).all() and np.isfinite(p1).all()
                and np.isfinite(x2).all() and np.isfinite(p2).all()):
            raise TrajectoryError(f"non-finite trajectory values at t={step * dt:g}")
        times.append(step * dt)
        counts.append(int(np.count_nonzero(x1 < 0.0)))
        e = ensemble_energy(Ensemble(x1, p1, x2, p2, ens.seed), params)
        drift.append(float(np.abs(e - e0).max()))

    f1, f2 = total_force(x1, x2, params)
    for step in range(1, nsteps + 1):
        p1 += 0.5 * dt * f1
        p2 += 0.5 * dt * f2
        x1 += dt * p1 / params.m1
        x2 += dt * p2 / params.m2
        if half is not None:
            np.mod(x2 + half, ring_circumference, out=x2)
            x2 -= half
        f1, f2 = total_force(x1, x2, params)
        p1 += 0.5 * dt * f1
        p2 += 0.5 * dt * f2
        if step % sample_stride == 0 or step == nsteps:
            record(step)

    ens.x1, ens.p1, ens.x2, ens.p2 = x1, p1, x2, p2
    counts_arr = np.array(counts, dtype=np.int64)
    return ClassicalSeries(
        times=np.array(times),
        tunneling=counts_arr / float(ens.n),
        energy_drift=np.array(drift),
        n=ens.n,
        seed=ens.seed,
        left_counts=counts_arr,
    )
