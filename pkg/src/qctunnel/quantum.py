"""Grid representation of psi(x1, x2) and split-operator time evolution.

The state lives on a doubly periodic rectangular lattice: x2 periodicity is
the physical ring confining particle 2, x1 periodicity is harmless because
the harmonic confinement keeps particle 1's density away from the box edge
(enforced by a runtime monitor).  One step is the symmetric Strang
factorization

    psi' = exp(-i V dt / 2 hbar) * K(dt) * exp(-i V dt / 2 hbar) psi,

with K the exact kinetic phase exp(-i dt (p1^2/2m1 + p2^2/2m2)/hbar) applied
in the momentum representation.  A dense finite-difference eigensolver for
the 1-D wells provides an independent oracle for the tunneling dynamics.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft
from scipy.linalg import eigh, eigh_tridiagonal

from .observables import (
    TimeSeries,
    reduced_density_diag,
    tunneling_rate,
    von_neumann_entropy,
)
from .potentials import PacketSpec, PotentialParams, total_potential, well_potential

__all__ = [
    "Grid2D",
    "WaveFunction2D",
    "EigenPair1D",
    "PropagationError",
    "make_grid",
    "init_product_gaussian",
    "SplitOperatorPropagator",
    "strang_step",
    "propagate",
    "energy_expectation",
    "save_state",
    "load_state",
    "eigen_oracle_1d",
    "predict_uncoupled_Tr",
    "SplitOperator1D",
    "propagate_packet_1d",
]

log = logging.getLogger(__name__)

OBSERVER_NAMES = ("norm", "energy", "tunneling", "entropy", "autocorrelation")


class PropagationError(RuntimeError):
    """Raised when a runtime monitor detects a broken propagation."""


def _momentum_lattice(n: int, dx: float, hbar: float) -> np.ndarray:
    # signed index j in [-n/2, n/2), FFT bin order: p_j = (2 pi hbar / (2 L)) j
    return 2.0 * np.pi * hbar * np.fft.fftfreq(n, d=dx)


@dataclass(frozen=True)
class Grid2D:
    """Coordinate/momentum lattices of the (x1, x2) box-plus-ring.

    x_i spans [-L_i, L_i) with n_i points (powers of two), dx_i = 2 L_i/n_i.
    Momentum lattices follow the standard transform bin order: index j in
    [-n/2, n/2) maps to p = (2 pi hbar/(2 L)) j, largest |p| = pi hbar/dx.
    """

    n1: int
    n2: int
    L1: float
    L2: float
    hbar: float = 1.0

    @property
    def dx1(self) -> float:
        return 2.0 * self.L1 / self.n1

    @property
    def dx2(self) -> float:
        return 2.0 * self.L2 / self.n2

    @functools.cached_property
    def x1(self) -> np.ndarray:
        return -self.L1 + self.dx1 * np.arange(self.n1)

    @functools.cached_property
    def x2(self) -> np.ndarray:
        return -self.L2 + self.dx2 * np.arange(self.n2)

    @functools.cached_property
    def p1(self) -> np.ndarray:
        return _momentum_lattice(self.n1, self.dx1, self.hbar)

    @functools.cached_property
    def p2(self) -> np.ndarray:
        return _momentum_lattice(self.n2, self.dx2, self.hbar)


def make_grid(n1: int, n2: int, L1: float, L2: float, hbar: float = 1.0) -> Grid2D:
    """Validated Grid2D; point counts must be powers of two, at least 16."""
    for name, n in (("n1", n1), ("n2", n2)):
        if n < 16 or n & (n - 1):
            raise ValueError(f"{name} must be a power of two >= 16, got {n}")
    if L1 <= 0 or L2 <= 0:
        raise ValueError("half-lengths L1, L2 must be positive")
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    return Grid2D(n1=int(n1), n2=int(n2), L1=float(L1), L2=float(L2), hbar=float(hbar))


@dataclass
class WaveFunction2D:
    """Complex amplitudes psi(x1, x2), row-major with x2 fastest."""

    grid: Grid2D
    amp: np.ndarray
    time: float = 0.0

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amp, self.amp).real * self.grid.dx1 * self.grid.dx2))

    def copy(self) -> "WaveFunction2D":
        return WaveFunction2D(grid=self.grid, amp=self.amp.copy(), time=self.time)


def _edge_density_ratio(amp: np.ndarray) -> float:
    """Max |psi|^2 on the x1 edge rows relative to the global max."""
    dens_max = float(np.abs(amp).max()) ** 2
    if dens_max == 0.0:
        return 0.0
    edge = max(float(np.abs(amp[0, :]).max()), float(np.abs(amp[-1, :]).max())) ** 2
    return edge / dens_max


def init_product_gaussian(grid: Grid2D, spec1: PacketSpec, spec2: PacketSpec) -> WaveFunction2D:
    """Product state phi1(x1) phi2(x2), renormalized on the grid.

    Refuses packets whose 6-sigma support leaves the box and states whose
    boundary density is not negligible (> 1e-12 of the density maximum on
    any edge row/column).
    """
    for axis, (spec, L) in enumerate(((spec1, grid.L1), (spec2, grid.L2)), start=1):
        reach = 6.0 * spec.sigma_x
        if spec.x0 - reach < -L or spec.x0 + reach >= L:
            raise ValueError(
                f"packet {axis} support [{spec.x0 - reach:.3f}, {spec.x0 + reach:.3f}] "
                f"leaves the grid [-{L}, {L})"
            )
    amp = np.outer(spec1.amplitude(grid.x1), spec2.amplitude(grid.x2)).astype(np.complex128)
    dens = np.abs(amp) ** 2
    edge = max(dens[0, :].max(), dens[-1, :].max(), dens[:, 0].max(), dens[:, -1].max())
    if edge > 1e-12 * dens.max():
        raise ValueError(
            f"boundary density {edge:.3e} exceeds 1e-12 of the maximum; enlarge the grid"
        )
    psi = WaveFunction2D(grid=grid, amp=amp, time=0.0)
    psi.amp /= psi.norm()
    return psi


class SplitOperatorPropagator:
    """Precomputed Strang-step phases for one (grid, params, dt) triple.

    Potential phases are evaluated once; each step costs one transform pair
    plus two elementwise phase multiplications (`run` fuses the adjacent
    half-potential phases of interior steps).
    """

    def __init__(self, grid: Grid2D, params: PotentialParams, dt: float):
        if dt <= 0:
            raise ValueError("dt must be positive")
        if params.hbar != grid.hbar:
            raise ValueError("params.hbar and grid.hbar disagree")
        self.grid = grid
        self.params = params
        self.dt = float(dt)
        hbar = params.hbar
        self.potential = total_potential(grid.x1[:, None], grid.x2[None, :], params)
        self.kinetic_energies = (
            grid.p1[:, None] ** 2 / (2.0 * params.m1) + grid.p2[None, :] ** 2 / (2.0 * params.m2)
        )
        self._half_v = np.exp(-0.5j * self.potential * dt / hbar)
        self._full_v = self._half_v * self._half_v
        self._kin = np.exp(-1j * self.kinetic_energies * dt / hbar)

    def _kinetic_apply(self, amp: np.ndarray) -> np.ndarray:
        amp = sfft.fft2(amp, overwrite_x=True)
        amp *= self._kin
        return sfft.ifft2(amp, overwrite_x=True)

    def run(self, amp: np.ndarray, nsteps: int) -> np.ndarray:
        """Advance `nsteps` Strang steps in place; returns the buffer."""
        if nsteps <= 0:
            return amp
        amp *= self._half_v
        for _ in range(nsteps - 1):
            amp = self._kinetic_apply(amp)
            amp *= self._full_v
        amp = self._kinetic_apply(amp)
        amp *= self._half_v
        return amp

    def step(self, amp: np.ndarray) -> np.ndarray:
        return self.run(amp, 1)


@functools.lru_cache(maxsize=8)
def _cached_propagator(grid: Grid2D, params: PotentialParams, dt: float) -> SplitOperatorPropagator:
    return SplitOperatorPropagator(grid, params, dt)


def strang_step(psi: WaveFunction2D, dt: float, params: PotentialParams) -> WaveFunction2D:
    """One Strang step; returns a new state at time + dt."""
    prop = _cached_propagator(psi.grid, params, float(dt))
    return WaveFunction2D(grid=psi.grid, amp=prop.step(psi.amp.copy()), time=psi.time + dt)


NORM_DRIFT_LIMIT = 1e-6
EDGE_DENSITY_LIMIT = 1e-6


def propagate(
    psi: WaveFunction2D,
    params: PotentialParams,
    t_final: float,
    dt: float,
    sample_stride: int = 1,
    observers=OBSERVER_NAMES,
) -> TimeSeries:
    """Evolve psi in place to t_final, sampling observables every stride steps.

    Aborts with a diagnostic if the norm drifts more than 1e-6 from its
    initial value or if density at the x1 box edge exceeds 1e-6 of the
    density maximum (the box must absorb nothing).  The sample times are
    uniform when sample_stride divides round(t_final/dt); a trailing partial
    block is still integrated and sampled.
    """
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if dt <= 0:
        raise ValueError("dt must be positive")
    sample_stride = int(sample_stride)
    if sample_stride < 1:
        raise ValueError("sample_stride must be >= 1")
    observers = tuple(observers)
    unknown = set(observers) - set(OBSERVER_NAMES)
    if unknown:
        raise ValueError(f"unknown observers {sorted(unknown)}; choose from {OBSERVER_NAMES}")

    nsteps = int(round(t_final / dt))
    if nsteps < 1:
        raise ValueError("t_final shorter than one step")
    prop = SplitOperatorPropagator(psi.grid, params, dt)
    blocks = [sample_stride] * (nsteps // sample_stride)
    if nsteps % sample_stride:
        blocks.append(nsteps % sample_stride)

    amp0 = psi.amp.copy() if "autocorrelation" in observers else None
    t0 = psi.time
    norm0 = psi.norm()
    cell = psi.grid.dx1 * psi.grid.dx2
    rows = {name: [] for name in observers}
    times = []

    def sample(steps_done: int):
        t = t0 + steps_done * dt
        norm = psi.norm()
        if abs(norm - norm0) > NORM_DRIFT_LIMIT:
            raise PropagationError(
                f"norm drifted to {norm:.12f} (initial {norm0:.12f}) at t={t:g}; "
                "dt or grid resolution is inadequate"
            )
        edge = _edge_density_ratio(psi.amp)
        if edge > EDGE_DENSITY_LIMIT:
            raise PropagationError(
                f"edge density ratio {edge:.3e} at t={t:g}; particle 1's box is too small "
                "(enlarge L1)"
            )
        times.append(t)
        for name in observers:
            if name == "norm":
                rows[name].append(norm)
            elif name == "energy":
                ft = sfft.fft2(psi.amp)
                kin = float((np.abs(ft) ** 2 * prop.kinetic_energies).sum()) * cell
                kin /= psi.grid.n1 * psi.grid.n2
                pot = float((np.abs(psi.amp) ** 2 * prop.potential).sum()) * cell
                rows[name].append(kin + pot)
            elif name == "tunneling":
                rows[name].append(tunneling_rate(reduced_density_diag(psi)))
            elif name == "entropy":
                rows[name].append(von_neumann_entropy(psi))
            elif name == "autocorrelation":
                rows[name].append(complex(np.vdot(amp0, psi.amp)) * cell)

    sample(0)
    done = 0
    for i, block in enumerate(blocks):
        psi.amp = prop.run(psi.amp, block)
        done += block
        psi.time = t0 + done * dt
        sample(done)
        if (i + 1) % 50 == 0:
            log.debug("propagated to t=%g (%d/%d steps)", psi.time, done, nsteps)

    out = TimeSeries(times=np.array(times))
    for name in observers:
        dtype = complex if name == "autocorrelation" else float
        setattr(out, name, np.array(rows[name], dtype=dtype))
    return out


def energy_expectation(psi: WaveFunction2D, params: PotentialParams) -> float:
    """<psi|H|psi>: spectral kinetic part plus grid-summed potential part."""
    grid = psi.grid
    if params.hbar != grid.hbar:
        raise ValueError("params.hbar and grid.hbar disagree")
    cell = grid.dx1 * grid.dx2
    tkin = grid.p1[:, None] ** 2 / (2.0 * params.m1) + grid.p2[None, :] ** 2 / (2.0 * params.m2)
    ft = sfft.fft2(psi.amp)
    kin = float((np.abs(ft) ** 2 * tkin).sum()) * cell / (grid.n1 * grid.n2)
    pot = float(
        (np.abs(psi.amp) ** 2 * total_potential(grid.x1[:, None], grid.x2[None, :], params)).sum()
    ) * cell
    return kin + pot


# --- checkpoint I/O ---------------------------------------------------------
#
# Binary record, little-endian throughout:
#   int64 n1, int64 n2, float64 L1, float64 L2, float64 time,
#   then n1*n2 complex amplitudes as interleaved (re, im) float64 pairs,
#   row-major with x2 fastest.


def save_state(psi: WaveFunction2D, path) -> None:
    with open(path, "wb") as fh:
        np.array([psi.grid.n1, psi.grid.n2], dtype="<i8").tofile(fh)
        np.array([psi.grid.L1, psi.grid.L2, psi.time], dtype="<f8").tofile(fh)
        np.ascontiguousarray(psi.amp).astype("<c16").tofile(fh)


def load_state(path, hbar: float = 1.0) -> WaveFunction2D:
    with open(path, "rb") as fh:
        n1, n2 = (int(v) for v in np.fromfile(fh, dtype="<i8", count=2))
        L1, L2, time = (float(v) for v in np.fromfile(fh, dtype="<f8", count=3))
        amp = np.fromfile(fh, dtype="<c16", count=n1 * n2)
    if amp.size != n1 * n2:
        raise ValueError(f"truncated checkpoint {path}")
    grid = make_grid(n1, n2, L1, L2, hbar=hbar)
    return WaveFunction2D(grid=grid, amp=amp.astype(np.complex128).reshape(n1, n2), time=time)


# --- 1-D eigen oracle -------------------------------------------------------


@dataclass(frozen=True)
class EigenPair1D:
    """One eigenpair of the 1-D finite-difference well Hamiltonian.

    `vector` is grid-normalized (sum |v|^2 dx = 1) on the shared lattice `x`.
    """

    energy: float
    vector: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])


def eigen_oracle_1d(k, lam, a, m, n, L, count, hbar=1.0, periodic=False):
    """Lowest `count` eigenpairs of the 1-D well by dense diagonalization.

    Second-order three-point kinetic stencil.  Hard-wall boundaries by
    default (lattice strictly inside (-L, L)); periodic uses the same
    [-L, L) lattice as the propagator grid.  n is capped at 4096 to keep
    the dense solve cheap.
    """
    n = int(n)
    if n > 4096:
        raise ValueError(f"eigen oracle limited to n <= 4096, got {n}")
    if not 1 <= count <= n:
        raise ValueError("count must be between 1 and n")
    if m <= 0 or L <= 0:
        raise ValueError("mass and box size must be positive")
    if periodic:
        dx = 2.0 * L / n
        x = -L + dx * np.arange(n)
    else:
        dx = 2.0 * L / (n + 1)
        x = -L + dx * np.arange(1, n + 1)
    v = well_potential(x, k, lam, a)
    t0 = hbar**2 / (2.0 * m * dx**2)
    if periodic:
        h = np.diag(v + 2.0 * t0) + np.diag(np.full(n - 1, -t0), 1) + np.diag(np.full(n - 1, -t0), -1)
        h[0, -1] = h[-1, 0] = -t0
        energies, vectors = eigh(h, subset_by_index=(0, count - 1))
    else:
        energies, vectors = eigh_tridiagonal(
            v + 2.0 * t0, np.full(n - 1, -t0), select="i", select_range=(0, count - 1)
        )
    vectors = vectors / np.sqrt(dx)
    pairs = []
    for i in range(count):
        vec = vectors[:, i]
        anchor = np.argmax(np.abs(vec))
        if vec[anchor] < 0:
            vec = -vec
        pairs.append(EigenPair1D(energy=float(energies[i]), vector=vec, x=x))
    return pairs


def predict_uncoupled_Tr(eigenpairs, packet: PacketSpec, times) -> np.ndarray:
    """Tunneling rate of an uncoupled packet from its eigen expansion.

    Expands the packet in the oracle basis, evolves the expansion phases
    analytically and integrates the left-side density at each time.  Errors
    out if the basis misses more than 1e-6 of the packet norm.
    """
    x = eigenpairs[0].x
    dx = eigenpairs[0].dx
    basis = np.stack([p.vector for p in eigenpairs])       # (count, n), real vectors
    energies = np.array([p.energy for p in eigenpairs])
    phi0 = packet.amplitude(x).astype(np.complex128)
    phi0 /= np.sqrt((np.abs(phi0) ** 2).sum() * dx)
    coeff = basis @ phi0 * dx
    coverage = float((np.abs(coeff) ** 2).sum())
    if coverage < 1.0 - 1e-6:
        raise ValueError(
            f"eigenbasis covers only {coverage:.9f} of the packet norm; increase count"
        )
    times = np.atleast_1d(np.asarray(times, dtype=float))
    phases = np.exp(-1j * np.outer(times, energies) / packet.hbar)
    fields = (phases * coeff) @ basis                      # (nt, n)
    weights = np.where(x < 0.0, 1.0, np.where(x == 0.0, 0.5, 0.0))
    return (np.abs(fields) ** 2 * weights).sum(axis=1) * dx


# --- 1-D split-operator (factorization oracle) ------------------------------


class SplitOperator1D:
    """Split-operator stepping of one particle on a periodic [-L, L) lattice.

    Mirrors the 2-D scheme exactly, so at gamma = 0 the 2-D evolution must
    equal the tensor product of two of these.
    """

    def __init__(self, n, L, k, lam, a, m, dt, hbar=1.0):
        n = int(n)
        if n < 16 or n & (n - 1):
            raise ValueError(f"n must be a power of two >= 16, got {n}")
        self.dx = 2.0 * L / n
        self.x = -L + self.dx * np.arange(n)
        self.p = _momentum_lattice(n, self.dx, hbar)
        self.dt = float(dt)
        self.hbar = hbar
        self.potential = well_potential(self.x, k, lam, a)
        self._half_v = np.exp(-0.5j * self.potential * dt / hbar)
        self._full_v = self._half_v * self._half_v
        self._kin = np.exp(-1j * self.p**2 / (2.0 * m) * dt / hbar)

    def run(self, amp: np.ndarray, nsteps: int) -> np.ndarray:
        if nsteps <= 0:
            return amp
        amp = amp * self._half_v
        for i in range(nsteps):
            amp = sfft.ifft(sfft.fft(amp, overwrite_x=True) * self._kin, overwrite_x=True)
            amp *= self._full_v if i < nsteps - 1 else self._half_v
        return amp


def propagate_packet_1d(
    packet: PacketSpec, k, lam, a, m, n, L, dt, t_final, sample_stride: int = 1, hbar=1.0
) -> TimeSeries:
    """One-particle reference run: norm, left-side probability and C(t).

    Entropy and energy fields stay None (meaningless for a single particle
    here); the left-side probability uses the same half-weight dividing
    surface as the 2-D tunneling rate.
    """
    prop = SplitOperator1D(n, L, k, lam, a, m, dt, hbar=hbar)
    amp = packet.amplitude(prop.x).astype(np.complex128)
    amp /= np.sqrt((np.abs(amp) ** 2).sum() * prop.dx)
    amp0 = amp.copy()
    weights = np.where(prop.x < 0.0, 1.0, np.where(prop.x == 0.0, 0.5, 0.0))
    nsteps = int(round(t_final / dt))
    stride = int(sample_stride)
    blocks = [stride] * (nsteps // stride)
    if nsteps % stride:
        blocks.append(nsteps % stride)
    times, norms, trs, cs = [0.0], [1.0], [float((np.abs(amp) ** 2 * weights).sum() * prop.dx)], [
        complex(np.vdot(amp0, amp) * prop.dx)
    ]
    done = 0
    for block in blocks:
        amp = prop.run(amp, block)
        done += block
        dens = np.abs(amp) ** 2
        times.append(done * dt)
        norms.append(float(np.sqrt(dens.sum() * prop.dx)))
        trs.append(float((dens * weights).sum() * prop.dx))
        cs.append(complex(np.vdot(amp0, amp) * prop.dx))
    return TimeSeries(
        times=np.array(times),
        norm=np.array(norms),
        tunneling=np.array(trs),
        autocorrelation=np.array(cs, dtype=complex),
    )
