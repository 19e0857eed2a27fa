"""Line-style and marker vocabulary shared by all four layouts.

Greyscale on purpose: curves are told apart by dash pattern and weight,
markers by shape, so the figures survive black-and-white printing.
"""

from __future__ import annotations

import math

__all__ = ["GAMMA_STYLES", "FALLBACK_STYLE", "CLASSICAL_THIN", "QUANTUM_SOLID",
           "CLASSICAL_DASHED", "SWEEP_MARKERS", "style_for_gamma"]

# coupling strength -> line style for overlay panels
GAMMA_STYLES = {
    0.01: {"linestyle": "dashdot", "linewidth": 1.2, "color": "black"},
    0.05: {"linestyle": "dashed", "linewidth": 1.2, "color": "black"},
    0.2: {"linestyle": "solid", "linewidth": 2.5, "color": "black"},
}

# any other coupling value
FALLBACK_STYLE = {"linestyle": "dotted", "linewidth": 1.2, "color": "black"}

# the classical counterpart in an overlay panel
CLASSICAL_THIN = {"linestyle": "solid", "linewidth": 0.8, "color": "black"}

# per-coupling panels: quantum solid against classical dashed
QUANTUM_SOLID = {"linestyle": "solid", "linewidth": 1.4, "color": "black"}
CLASSICAL_DASHED = {"linestyle": "dashed", "linewidth": 1.2, "color": "black"}

# sweep summaries: open circle/diamond for the means, down/up triangles
# for one cycle's maximum and minimum of the quantum rate
SWEEP_MARKERS = {
    "q_mean": {"marker": "o", "label": "quantum mean"},
    "c_mean": {"marker": "D", "label": "classical mean"},
    "q_cycle_max": {"marker": "v", "label": "cycle maximum"},
    "q_cycle_min": {"marker": "^", "label": "cycle minimum"},
}


def style_for_gamma(gamma: float | None) -> dict:
    """Caption style for the canonical couplings, dotted otherwise."""
    if gamma is not None:
        for known, style in GAMMA_STYLES.items():
            if math.isclose(gamma, known, rel_tol=1e-9):
                return dict(style)
    return dict(FALLBACK_STYLE)
