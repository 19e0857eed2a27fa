"""Double-well and interaction potentials of the two-particle system.

Each particle moves in a bounded harmonic potential with a Gaussian bump
at the origin,

    v(x) = k x^2 / 2 + lam * exp(-x^2 / a^2),

and the particles attract each other through a displaced quadratic,

    v_int(x1, x2) = gamma (x1 - x2 - l0)^2 / 2.

All functions are pure and accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "PotentialParams",
    "PacketSpec",
    "WellGeometry",
    "well_potential",
    "well_force",
    "well_minima",
    "interaction_potential",
    "total_potential",
    "total_force",
    "packet_for_well",
]


@dataclass(frozen=True)
class PotentialParams:
    """Constants of the two-particle Hamiltonian (arbitrary units)."""

    m1: float = 1.0
    m2: float = 1.0
    k1: float = 0.5
    k2: float = 0.5
    lambda1: float = 3.0
    lambda2: float = 3.0
    a1: float = 1.0
    a2: float = 1.0
    gamma: float = 0.0
    l0: float = 0.5
    hbar: float = 1.0

    def __post_init__(self):
        if self.m1 <= 0 or self.m2 <= 0:
            raise ValueError("masses must be positive")
        if self.a1 <= 0 or self.a2 <= 0:
            raise ValueError("barrier widths a1, a2 must be positive")
        if self.k1 < 0 or self.k2 < 0:
            raise ValueError("harmonic stiffness k1, k2 must be nonnegative")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("barrier heights lambda1, lambda2 must be nonnegative")
        if self.gamma < 0:
            raise ValueError("interaction stiffness gamma must be nonnegative")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")

    def well(self, particle: int) -> tuple[float, float, float]:
        """(k, lam, a) of the on-site potential of particle 1 or 2."""
        if particle == 1:
            return self.k1, self.lambda1, self.a1
        if particle == 2:
            return self.k2, self.lambda2, self.a2
        raise ValueError(f"particle index must be 1 or 2, got {particle!r}")

    def mass(self, particle: int) -> float:
        if particle == 1:
            return self.m1
        if particle == 2:
            return self.m2
        raise ValueError(f"particle index must be 1 or 2, got {particle!r}")

    def with_(self, **changes) -> "PotentialParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian packet  phi(x) = A exp(-alpha (x-x0)^2 / 2 hbar) e^{i p0 (x-x0)/hbar}.

    The density |phi|^2 is normal with variance hbar/(2 alpha); A is fixed by
    normalization and is not user-set.
    """

    x0: float
    alpha: float
    p0: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("packet width parameter alpha must be positive")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")

    @property
    def norm_const(self) -> float:
        """Normalization A = (alpha / pi hbar)^(1/4)."""
        return (self.alpha / (math.pi * self.hbar)) ** 0.25

    @property
    def sigma_x(self) -> float:
        """Position std dev of |phi|^2."""
        return math.sqrt(self.hbar / (2.0 * self.alpha))

    def amplitude(self, x):
        """Evaluate phi on a lattice; complex only when p0 != 0."""
        x = np.asarray(x, dtype=float)
        envelope = self.norm_const * np.exp(-self.alpha * (x - self.x0) ** 2 / (2.0 * self.hbar))
        if self.p0 == 0.0:
            return envelope
        return envelope * np.exp(1j * self.p0 * (x - self.x0) / self.hbar)


@dataclass(frozen=True)
class WellGeometry:
    """Stationary points of one on-site double well."""

    minima: tuple[float, float]  # (-x*, +x*), or (0.0, 0.0) for a single well
    barrier_top: float           # v(0) = lam
    min_value: float             # v(x*)

    @property
    def is_double_well(self) -> bool:
        return self.minima[0] != self.minima[1]


def well_potential(x, k, lam, a):
    """On-site potential  k x^2/2 + lam exp(-x^2/a^2)."""
    if a <= 0:
        raise ValueError("barrier width a must be positive")
    x = np.asarray(x, dtype=float)
    v = 0.5 * k * x**2 + lam * np.exp(-(x / a) ** 2)
    return v if v.ndim else float(v)


def well_force(x, k, lam, a):
    """-d/dx of well_potential:  -k x + (2 lam x / a^2) exp(-x^2/a^2)."""
    if a <= 0:
        raise ValueError("barrier width a must be positive")
    x = np.asarray(x, dtype=float)
    f = -k * x + (2.0 * lam / a**2) * x * np.exp(-(x / a) ** 2)
    return f if f.ndim else float(f)


def well_minima(k, lam, a) -> WellGeometry:
    """Locate the well minima.

    For 2 lam > k a^2 the potential is a double well with minima at
    +-a sqrt(ln(2 lam / k a^2)); otherwise the only minimum is x = 0.
    """
    if k <= 0:
        raise ValueError("well_minima requires k > 0")
    if a <= 0:
        raise ValueError("barrier width a must be positive")
    ratio = 2.0 * lam / (k * a**2)
    if ratio > 1.0:
        xstar = a * math.sqrt(math.log(ratio))
        return WellGeometry(
            minima=(-xstar, xstar),
            barrier_top=lam,
            min_value=well_potential(xstar, k, lam, a),
        )
    return WellGeometry(minima=(0.0, 0.0), barrier_top=lam, min_value=well_potential(0.0, k, lam, a))


def interaction_potential(x1, x2, gamma, l0):
    """Attractive pair coupling  gamma (x1 - x2 - l0)^2 / 2."""
    d = np.asarray(x1, dtype=float) - np.asarray(x2, dtype=float) - l0
    v = 0.5 * gamma * d**2
    return v if v.ndim else float(v)


def total_potential(x1, x2, params: PotentialParams):
    """V(x1, x2) = v1(x1) + v2(x2) + v_int(x1 - x2)."""
    return (
        well_potential(x1, params.k1, params.lambda1, params.a1)
        + well_potential(x2, params.k2, params.lambda2, params.a2)
        + interaction_potential(x1, x2, params.gamma, params.l0)
    )


def total_force(x1, x2, params: PotentialParams):
    """Analytic forces (F1, F2) = (-dV/dx1, -dV/dx2).

    The interaction depends on x1 - x2 only, so its contributions to F1 and
    F2 cancel pairwise.
    """
    d = np.asarray(x1, dtype=float) - np.asarray(x2, dtype=float) - params.l0
    pull = params.gamma * d
    f1 = well_force(x1, params.k1, params.lambda1, params.a1) - pull
    f2 = well_force(x2, params.k2, params.lambda2, params.a2) + pull
    return f1, f2


def packet_for_well(params: PotentialParams, particle: int, side: str, alpha: float) -> PacketSpec:
    """Gaussian packet resting (p0 = 0) at the bottom of one well.

    Raises if the requested particle's on-site potential has no double-well
    structure, since then there is no left or right bottom to rest on.
    """
    k, lam, a = params.well(particle)
    geom = well_minima(k, lam, a)
    if not geom.is_double_well:
        raise ValueError(
            f"particle {particle} potential (k={k}, lambda={lam}, a={a}) has a single minimum; "
            "cannot place a packet on one side"
        )
    if side == "right":
        x0 = geom.minima[1]
    elif side == "left":
        x0 = geom.minima[0]
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return PacketSpec(x0=x0, alpha=alpha, p0=0.0, hbar=params.hbar)
