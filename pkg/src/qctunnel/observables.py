"""Observables on quantum states and sampled time series.

Includes the particle-1 reduced density and tunneling rate, Schmidt/von
Neumann entanglement entropy, survival amplitude (autocorrelation), the
spectral density of the autocorrelation, and tunneling-cycle statistics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ReducedDensityDiag",
    "TimeSeries",
    "SpectralDensity",
    "CycleStats",
    "reduced_density_diag",
    "tunneling_rate",
    "schmidt_spectrum",
    "von_neumann_entropy",
    "entropy_from_schmidt",
    "autocorrelation",
    "spectral_density",
    "dominant_lines",
    "cycle_stats",
]


@dataclass(frozen=True)
class ReducedDensityDiag:
    """Diagonal of the particle-1 reduced density on its coordinate lattice."""

    x1: np.ndarray
    rho1: np.ndarray
    dx1: float

    def integral(self) -> float:
        return float(self.rho1.sum() * self.dx1)


@dataclass
class TimeSeries:
    """Observables sampled along one quantum propagation.

    Arrays not requested from the propagation are None.  `autocorrelation`
    is complex: the survival amplitude against the stored initial state.
    """

    times: np.ndarray
    norm: np.ndarray | None = None
    energy: np.ndarray | None = None
    tunneling: np.ndarray | None = None
    entropy: np.ndarray | None = None
    autocorrelation: np.ndarray | None = None


@dataclass(frozen=True)
class SpectralDensity:
    """Normalized power spectrum of the autocorrelation series.

    `energies` is the uniform fftshifted lattice E = hbar*omega and `rho`
    sums to 1.  `resolution` is the window-limited line width 2*pi*hbar/T;
    with zero-padding the bin spacing `bin_width` is finer than that.
    `power_total` keeps the raw (unnormalized) total DFT power so Parseval
    bookkeeping stays checkable.
    """

    energies: np.ndarray
    rho: np.ndarray
    resolution: float
    bin_width: float
    window: str
    power_total: float
    n_samples: int


@dataclass(frozen=True)
class CycleStats:
    """Mean plus extrema of the last complete oscillation cycle."""

    mean: float
    cycle_max: float
    cycle_min: float
    degenerate: bool = False


def reduced_density_diag(psi) -> ReducedDensityDiag:
    """rho1(x1) = sum_j |psi(x1, x2_j)|^2 dx2, the particle-2 trace."""
    grid = psi.grid
    rho1 = (np.abs(psi.amp) ** 2).sum(axis=1) * grid.dx2
    return ReducedDensityDiag(x1=grid.x1, rho1=rho1, dx1=grid.dx1)


def _left_weights(x: np.ndarray) -> np.ndarray:
    # dividing surface exactly at x = 0; the on-surface gridpoint counts half
    return np.where(x < 0.0, 1.0, np.where(x == 0.0, 0.5, 0.0))


def tunneling_rate(rho1: ReducedDensityDiag) -> float:
    """Probability mass of rho1 on the far side of the barrier (x1 < 0)."""
    t = float((rho1.rho1 * _left_weights(rho1.x1)).sum() * rho1.dx1)
    return min(max(t, 0.0), 1.0)


def schmidt_spectrum(psi) -> np.ndarray:
    """Schmidt weights of the bipartite state, descending, summing to ||psi||^2.

    Weights are the squared singular values of the amplitude matrix scaled by
    sqrt(dx1 dx2), i.e. eigenvalues of the reduced density operator.
    """
    s = np.linalg.svd(psi.amp, compute_uv=False)
    return s**2 * (psi.grid.dx1 * psi.grid.dx2)


def von_neumann_entropy(psi) -> float:
    """Entanglement entropy S = -sum lam ln lam over Schmidt weights (nats).

    Sign convention: S >= 0, with 0*ln 0 := 0.
    """
    lam = schmidt_spectrum(psi)
    pos = lam > 0.0
    return float(-(lam[pos] * np.log(lam[pos])).sum())


def entropy_from_schmidt(lam: np.ndarray) -> float:
    """Entropy of an explicit Schmidt weight vector (same convention)."""
    lam = np.asarray(lam, dtype=float)
    pos = lam > 0.0
    return float(-(lam[pos] * np.log(lam[pos])).sum())


def autocorrelation(psi0, psit) -> complex:
    """Survival amplitude C(t) = <psi0|psi(t)> on the shared grid."""
    if psi0.grid != psit.grid:
        raise ValueError("autocorrelation requires both states on the same grid")
    return complex(np.vdot(psi0.amp, psit.amp) * psi0.grid.dx1 * psi0.grid.dx2)


_WINDOWS = {
    "rect": lambda n: np.ones(n),
    "rectangular": lambda n: np.ones(n),
    "hann": lambda n: np.hanning(n),
}


def spectral_density(c_series, dt, window="hann", pad=4, hbar=1.0) -> SpectralDensity:
    """Power spectrum of a uniformly sampled autocorrelation series.

    C(t) = sum_n w_n exp(-i E_n t / hbar) produces lines at the populated
    energies E_n with spectral weight proportional to w_n^2.  The windowed
    series is zero-padded `pad`-fold (finer bins, unchanged resolution),
    transformed, and |F|^2 is normalized to unit total weight.
    """
    c = np.asarray(c_series, dtype=complex)
    if c.ndim != 1 or c.size < 16:
        raise ValueError("spectral_density needs a 1-D series of at least 16 samples")
    if dt <= 0:
        raise ValueError("dt must be positive")
    if window not in _WINDOWS:
        raise ValueError(f"window must be one of {sorted(_WINDOWS)}, got {window!r}")
    if pad < 1:
        raise ValueError("pad must be >= 1")
    n = c.size
    wfun = _WINDOWS[window]
    wc = c * wfun(n)
    n_pad = n * int(pad)
    # e^{-iE t} tones must land at +E: transform with the e^{+i omega t} kernel
    f = np.fft.ifft(wc, n=n_pad) * n_pad
    power = np.abs(f) ** 2
    total = float(power.sum())
    rho = power / total if total > 0.0 else power
    omega = 2.0 * np.pi * np.fft.fftfreq(n_pad, d=dt)
    energies = np.fft.fftshift(hbar * omega)
    return SpectralDensity(
        energies=energies,
        rho=np.fft.fftshift(rho),
        resolution=2.0 * np.pi * hbar / (n * dt),
        bin_width=2.0 * np.pi * hbar / (n_pad * dt),
        window=window,
        power_total=total,
        n_samples=n,
    )


def dominant_lines(sd: SpectralDensity, floor=1e-12):
    """Spectral lines as (energy, weight) pairs, strongest first.

    The spectrum is segmented at local minima between local maxima; each
    segment's weight is the sum of its bins, so segment weights add up to 1.
    `floor` (relative to the tallest bin) discards noise-level maxima; their
    bins are absorbed into the adjacent segment.
    """
    rho = sd.rho
    n = rho.size
    thresh = rho.max() * floor
    interior = (rho[1:-1] >= rho[:-2]) & (rho[1:-1] >= rho[2:]) & (rho[1:-1] > thresh)
    peaks = np.flatnonzero(interior) + 1
    # one bin per plateau: keep only maxima strictly above their left neighbor
    peaks = peaks[rho[peaks] > rho[peaks - 1]]
    if peaks.size == 0:
        return []
    bounds = [0]
    for left, right in zip(peaks[:-1], peaks[1:]):
        bounds.append(left + int(np.argmin(rho[left:right + 1])))
    bounds.append(n)
    lines = []
    for p, lo, hi in zip(peaks, bounds[:-1], bounds[1:]):
        lines.append((float(sd.energies[p]), float(rho[lo:hi].sum())))
    lines.sort(key=lambda ew: ew[1], reverse=True)
    return lines


def cycle_stats(times, values, window=None) -> CycleStats:
    """Mean over a time window plus extrema of the last full cycle inside it.

    A cycle is delimited by successive upward crossings of the window mean.
    With fewer than two upward crossings the series is degenerate and the
    extrema collapse onto the mean.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape != values.shape or times.ndim != 1 or times.size == 0:
        raise ValueError("times and values must be matching nonempty 1-D arrays")
    if window is None:
        sel = slice(None)
    else:
        t0, t1 = window
        if t0 < times[0] or t1 > times[-1] or t1 <= t0:
            raise ValueError(f"series [{times[0]}, {times[-1]}] does not cover window {window}")
        sel = (times >= t0) & (times <= t1)
    t = times[sel]
    y = values[sel]
    mean = float(y.mean())
    above = y >= mean
    up = np.flatnonzero(~above[:-1] & above[1:]) + 1
    if up.size < 2:
        return CycleStats(mean=mean, cycle_max=mean, cycle_min=mean, degenerate=True)
    seg = y[up[-2]:up[-1] + 1]
    return CycleStats(mean=mean, cycle_max=float(seg.max()), cycle_min=float(seg.min()))
