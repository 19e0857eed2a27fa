"""Switching on the coupling: entanglement entropy versus tunneling.

Runs the same two-particle scenario twice on a small grid, once uncoupled
and once with gamma = 0.1.  Uncoupled, the state stays a product (entropy at
round-off) and particle 1 tunnels freely.  Coupled, particle 2 measures
which well particle 1 occupies; the entropy climbs and the coherent
oscillation collapses.

Run from the repository root:  python demos/entanglement_decoherence.py
"""

import numpy as np

from qctunnel.potentials import PotentialParams, packet_for_well
from qctunnel.quantum import init_product_gaussian, make_grid, propagate

T_FINAL, DT, STRIDE = 100.0, 0.005, 100
grid = make_grid(128, 128, 10.0, 12.0)


def run(gamma: float):
    params = PotentialParams(lambda2=15.0, gamma=gamma)
    psi = init_product_gaussian(
        grid,
        packet_for_well(params, 1, "right", 3.0),
        packet_for_well(params, 2, "left", 3.0),
    )
    return propagate(psi, params, T_FINAL, DT, STRIDE)


print(f"grid {grid.n1} x {grid.n2}, t up to {T_FINAL:g} "
      f"({int(T_FINAL / DT)} steps per run; about ten seconds each)\n")

runs = {gamma: run(gamma) for gamma in (0.0, 0.1)}

print(f"{'t':>6}   " + "   ".join(f"gamma={g:g}: T_r      S" for g in runs))
for i in range(0, len(runs[0.0].times), 40):
    row = f"{runs[0.0].times[i]:6.1f}   "
    row += "   ".join(
        f"{series.tunneling[i]:12.4f} {series.entropy[i]:8.4f}" for series in runs.values()
    )
    print(row)

for gamma, series in runs.items():
    print(f"\ngamma = {gamma:g}: max T_r {series.tunneling.max():.4f}, "
          f"final entropy {series.entropy[-1]:.4f}, "
          f"max |C(t)| after t=20 {np.abs(series.autocorrelation[series.times > 20]).max():.4f}")

print("\nthe coupled run never completes a crossing: the probe's record of")
print("particle 1's position destroys the interference that tunneling needs.")
