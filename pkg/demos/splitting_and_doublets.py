"""One particle in the double well: doublet splitting sets the tunneling clock.

Diagonalizes the on-site Hamiltonian on a dense 1-D lattice, then propagates
a packet resting in the right well and reads the same physics back out of
the autocorrelation spectrum: the two dominant lines are the lowest doublet,
and the left-side probability oscillates with period pi/(E1 - E0).

Run from the repository root:  python demos/splitting_and_doublets.py
"""

import math

import numpy as np

from qctunnel.observables import dominant_lines, spectral_density
from qctunnel.potentials import PotentialParams, packet_for_well, well_minima
from qctunnel.quantum import eigen_oracle_1d, predict_uncoupled_Tr, propagate_packet_1d

K, LAM, A, M = 0.5, 3.0, 1.0, 1.0

geometry = well_minima(K, LAM, A)
print(f"double well: minima at x = {geometry.minima[0]:+.4f}, {geometry.minima[1]:+.4f}, "
      f"barrier top {geometry.barrier_top:.1f}, well depth {geometry.barrier_top - geometry.min_value:.3f}")

# lattice diagonalization: the low spectrum comes in near-degenerate pairs
pairs = eigen_oracle_1d(K, LAM, A, M, n=2048, L=10.0, count=8)
print("\nlowest levels (doublet gaps in parentheses):")
for even, odd in zip(pairs[0::2], pairs[1::2]):
    print(f"  E = {even.energy: .6f} / {odd.energy: .6f}   (split {odd.energy - even.energy:.6f})")

splitting = pairs[1].energy - pairs[0].energy
print(f"\nground doublet splitting {splitting:.6f} -> half period pi/split = {math.pi / splitting:.1f}")

# propagate the resting packet and watch the left-side probability
packet = packet_for_well(PotentialParams(), 1, "right", 3.0)
series = propagate_packet_1d(packet, K, LAM, A, M, n=256, L=10.0,
                             dt=0.002, t_final=400.0, sample_stride=250)
crest = int(np.argmax(series.tunneling))
print(f"grid run: max left-side probability {series.tunneling[crest]:.4f} "
      f"at t = {series.times[crest]:.1f}")

# 64 levels cover the packet to round-off
pairs_full = eigen_oracle_1d(K, LAM, A, M, 2048, 10.0, 64)
predicted = predict_uncoupled_Tr(pairs_full, packet, series.times)
print(f"eigenbasis prediction matches the grid to {np.abs(series.tunneling - predicted).max():.2e}")

# the autocorrelation spectrum re-measures the populated levels: a t=400
# record resolves 2 pi/400 = 0.016, comfortably below the 0.061 splitting
spectrum = spectral_density(series.autocorrelation, 0.5, window="hann", pad=4)
lines = dominant_lines(spectrum)
top2 = lines[0][1] + lines[1][1]
print(f"\nspectral lines (top two carry {top2:.1%} of the weight):")
for energy, weight in lines[:4]:
    print(f"  E = {energy:.4f}   weight {weight:.4f}")
print("the two dominant lines are the ground doublet itself; their beat is")
print("the tunneling oscillation, and everything else is a percent-level rider.")
