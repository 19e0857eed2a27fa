"""Reduced densities, entropy, autocorrelation spectra and cycle statistics."""

import math

import numpy as np
import pytest
from scipy.ndimage import gaussian_filter

from qctunnel.observables import (
    cycle_stats,
    dominant_lines,
    entropy_from_schmidt,
    reduced_density_diag,
    schmidt_spectrum,
    spectral_density,
    tunneling_rate,
    von_neumann_entropy,
)
from qctunnel.potentials import PacketSpec
from qctunnel.quantum import WaveFunction2D, init_product_gaussian, make_grid


def product_state(x01=1.0, x02=-1.0, n1=64, n2=64, L1=8.0, L2=8.0):
    grid = make_grid(n1, n2, L1, L2)
    return init_product_gaussian(
        grid, PacketSpec(x0=x01, alpha=3.0), PacketSpec(x0=x02, alpha=3.0))


def test_reduced_density_of_product_state_is_particle1_marginal():
    psi = product_state()
    rho = reduced_density_diag(psi)
    phi1 = PacketSpec(x0=1.0, alpha=3.0).amplitude(psi.grid.x1)
    assert rho.integral() == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(rho.rho1 - np.abs(phi1) ** 2)) < 1e-10


def test_tunneling_rate_bounds_and_symmetry():
    psi = product_state(x01=0.0)      # symmetric about the dividing surface
    assert tunneling_rate(reduced_density_diag(psi)) == pytest.approx(0.5, abs=1e-6)
    left = product_state(x01=-2.0)
    right = product_state(x01=2.0)
    t_left = tunneling_rate(reduced_density_diag(left))
    t_right = tunneling_rate(reduced_density_diag(right))
    assert 0.0 <= t_right < 1e-6 and 1.0 - 1e-6 < t_left <= 1.0


def test_tunneling_rate_half_weight_on_dividing_point():
    # lattice contains x1 = 0 exactly (index n/2); a state concentrated
    # there must count half left, half right
    grid = make_grid(16, 16, 1.0, 1.0)
    amp = np.zeros((16, 16), dtype=complex)
    amp[8, :] = 1.0
    psi = WaveFunction2D(grid=grid, amp=amp)
    psi.amp /= psi.norm()
    assert grid.x1[8] == 0.0
    assert tunneling_rate(reduced_density_diag(psi)) == pytest.approx(0.5, rel=1e-12)


def test_product_state_has_zero_entropy():
    psi = product_state()
    lam = schmidt_spectrum(psi)
    assert lam[0] == pytest.approx(1.0, abs=1e-10)
    assert von_neumann_entropy(psi) == pytest.approx(0.0, abs=1e-10)


def test_maximally_entangled_entropy_is_log_k():
    # k orthogonal product terms with equal weights -> S = ln k
    grid = make_grid(32, 32, 4.0, 4.0)
    rng = np.random.default_rng(5)
    for k in (2, 4):
        left = np.linalg.qr(rng.normal(size=(32, k)))[0]
        right = np.linalg.qr(rng.normal(size=(32, k)))[0]
        amp = sum(np.outer(left[:, i], right[:, i]) for i in range(k)).astype(complex)
        psi = WaveFunction2D(grid=grid, amp=amp)
        psi.amp /= psi.norm()
        assert von_neumann_entropy(psi) == pytest.approx(math.log(k), abs=1e-10)


def test_entropy_agrees_with_reduced_density_diagonalization():
    # Schmidt route vs diagonalizing the reduced density operator built
    # explicitly from psi, on an entangled state
    grid = make_grid(64, 64, 6.0, 6.0)
    rng = np.random.default_rng(7)
    amp = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
    # smooth it so the state resembles a wavefunction rather than noise
    amp = gaussian_filter(amp.real, 3.0) + 1j * gaussian_filter(amp.imag, 3.0)
    psi = WaveFunction2D(grid=grid, amp=amp.astype(complex))
    psi.amp /= psi.norm()
    rho_op = psi.amp @ psi.amp.conj().T * grid.dx1 * grid.dx2
    evals = np.linalg.eigvalsh(rho_op)
    s_direct = entropy_from_schmidt(evals)
    assert von_neumann_entropy(psi) == pytest.approx(s_direct, abs=1e-8)


def test_entropy_from_schmidt_handles_zero_weights():
    assert entropy_from_schmidt(np.array([1.0, 0.0, 0.0])) == pytest.approx(0.0, abs=1e-15)
    assert entropy_from_schmidt(np.array([0.5, 0.5])) == pytest.approx(math.log(2), rel=1e-12)


def test_autocorrelation_normalization_and_grid_check():
    from qctunnel.observables import autocorrelation
    psi = product_state()
    assert autocorrelation(psi, psi) == pytest.approx(1.0 + 0.0j, abs=1e-12)
    other = product_state(n1=32, n2=64, L1=8.0, L2=8.0)
    with pytest.raises(ValueError):
        autocorrelation(psi, other)


def two_tone_series(w1, w2, e1, e2, n, dt):
    t = np.arange(n) * dt
    return w1 * np.exp(-1j * e1 * t) + w2 * np.exp(-1j * e2 * t)


def test_spectral_density_two_tone_weights_and_positions():
    # tones on exact bin frequencies, rectangular window: no leakage
    n, dt = 256, 0.1
    base = 2 * math.pi / (n * dt)
    e1, e2 = 20 * base, 52 * base
    c = two_tone_series(0.8, 0.2, e1, e2, n, dt)
    sd = spectral_density(c, dt, window="rect", pad=1)
    lines = dominant_lines(sd)
    assert len(lines) == 2
    (ea, wa), (eb, wb) = lines
    assert ea == pytest.approx(e1, abs=1e-9) and eb == pytest.approx(e2, abs=1e-9)
    # power weights are amplitude^2 -> 0.64 : 0.04
    assert wa == pytest.approx(0.64 / 0.68, rel=1e-9)
    assert wb == pytest.approx(0.04 / 0.68, rel=1e-9)


def test_spectral_density_hann_padded_still_ranks_lines():
    n, dt = 400, 0.05
    base = 2 * math.pi / (n * dt)
    e1, e2 = 30 * base, 90 * base
    c = two_tone_series(0.7, 0.3, e1, e2, n, dt)
    sd = spectral_density(c, dt, window="hann", pad=4)
    lines = dominant_lines(sd)
    assert lines[0][0] == pytest.approx(e1, abs=sd.bin_width)
    assert lines[1][0] == pytest.approx(e2, abs=sd.bin_width)
    assert lines[0][1] > lines[1][1]
    assert sd.bin_width == pytest.approx(sd.resolution / 4)


def test_spectral_density_negative_energy_tone():
    n, dt = 128, 0.2
    base = 2 * math.pi / (n * dt)
    c = two_tone_series(1.0, 0.0, -12 * base, 0.0, n, dt)
    sd = spectral_density(c, dt, window="rect", pad=1)
    assert dominant_lines(sd)[0][0] == pytest.approx(-12 * base, abs=1e-9)


def test_spectral_density_parseval_rectangular():
    rng = np.random.default_rng(9)
    c = rng.normal(size=64) + 1j * rng.normal(size=64)
    sd = spectral_density(c, 0.1, window="rect", pad=1)
    # ifft*N convention: sum |F|^2 = N sum |c|^2
    assert sd.power_total / 64**2 == pytest.approx(
        np.mean(np.abs(c) ** 2), rel=1e-12)
    assert sd.rho.sum() == pytest.approx(1.0, rel=1e-12)


def test_spectral_density_rejects_bad_input():
    with pytest.raises(ValueError):
        spectral_density(np.ones(8), 0.1)
    with pytest.raises(ValueError):
        spectral_density(np.ones(32), -0.1)
    with pytest.raises(ValueError):
        spectral_density(np.ones(32), 0.1, window="kaiser")


def test_dominant_lines_flat_and_single():
    n, dt = 64, 0.1
    sd = spectral_density(np.ones(n, dtype=complex), dt, window="rect", pad=1)
    lines = dominant_lines(sd)
    assert lines[0][0] == pytest.approx(0.0, abs=1e-12)
    assert lines[0][1] == pytest.approx(1.0, rel=1e-12)


def test_cycle_stats_oscillation():
    t = np.linspace(0, 20 * math.pi, 20001)
    stats = cycle_stats(t, np.sin(t) ** 2)
    assert not stats.degenerate
    assert stats.mean == pytest.approx(0.5, abs=1e-3)
    assert stats.cycle_max == pytest.approx(1.0, abs=1e-3)
    assert stats.cycle_min == pytest.approx(0.0, abs=1e-3)


def test_cycle_stats_constant_is_degenerate():
    t = np.linspace(0, 10, 101)
    stats = cycle_stats(t, np.full_like(t, 0.3))
    assert stats.degenerate
    assert stats.mean == stats.cycle_max == stats.cycle_min == pytest.approx(0.3)


def test_cycle_stats_window():
    t = np.linspace(0, 100, 10001)
    y = np.sin(t) ** 2 + 0.001 * t          # slight drift
    stats = cycle_stats(t, y, window=(50.0, 100.0))
    assert 0.5 < stats.mean < 0.6
    with pytest.raises(ValueError):
        cycle_stats(t, y, window=(50.0, 200.0))
