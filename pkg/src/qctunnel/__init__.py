"""Quantum and classical dynamics of a tunneling particle coupled to a probe.

A particle in a symmetric double well (harmonic confinement plus a Gaussian
barrier) is coupled harmonically to a second particle on a ring.  The
package propagates the exact two-particle wave function on a grid, runs the
matching classical trajectory ensemble, and extracts tunneling rates,
entanglement entropy and autocorrelation spectra.
"""

from .potentials import (
    PacketSpec,
    PotentialParams,
    WellGeometry,
    interaction_potential,
    packet_for_well,
    total_force,
    total_potential,
    well_force,
    well_minima,
    well_potential,
)
from .observables import (
    CycleStats,
    ReducedDensityDiag,
    SpectralDensity,
    TimeSeries,
    autocorrelation,
    cycle_stats,
    dominant_lines,
    entropy_from_schmidt,
    reduced_density_diag,
    schmidt_spectrum,
    spectral_density,
    tunneling_rate,
    von_neumann_entropy,
)
from .quantum import (
    EigenPair1D,
    Grid2D,
    PropagationError,
    SplitOperator1D,
    SplitOperatorPropagator,
    WaveFunction2D,
    eigen_oracle_1d,
    energy_expectation,
    init_product_gaussian,
    load_state,
    make_grid,
    predict_uncoupled_Tr,
    propagate,
    propagate_packet_1d,
    save_state,
    strang_step,
)
from .classical import (
    ClassicalSeries,
    Ensemble,
    TrajectoryError,
    WignerGaussian,
    propagate_ensemble,
    sample_ensemble,
    verlet_step,
    wigner_widths,
)
from .runner import (
    PRESETS,
    ConfigError,
    RunManifest,
    ScenarioConfig,
    format_config,
    parse_config,
    preset_config,
    run_scenario,
    run_sweep,
    verify_manifest,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # potentials
    "PacketSpec",
    "PotentialParams",
    "WellGeometry",
    "interaction_potential",
    "packet_for_well",
    "total_force",
    "total_potential",
    "well_force",
    "well_minima",
    "well_potential",
    # observables
    "CycleStats",
    "ReducedDensityDiag",
    "SpectralDensity",
    "TimeSeries",
    "autocorrelation",
    "cycle_stats",
    "dominant_lines",
    "entropy_from_schmidt",
    "reduced_density_diag",
    "schmidt_spectrum",
    "spectral_density",
    "tunneling_rate",
    "von_neumann_entropy",
    # quantum
    "EigenPair1D",
    "Grid2D",
    "PropagationError",
    "SplitOperator1D",
    "SplitOperatorPropagator",
    "WaveFunction2D",
    "eigen_oracle_1d",
    "energy_expectation",
    "init_product_gaussian",
    "load_state",
    "make_grid",
    "predict_uncoupled_Tr",
    "propagate",
    "propagate_packet_1d",
    "save_state",
    "strang_step",
    # classical
    "ClassicalSeries",
    "Ensemble",
    "TrajectoryError",
    "WignerGaussian",
    "propagate_ensemble",
    "sample_ensemble",
    "verlet_step",
    "wigner_widths",
    # runner
    "PRESETS",
    "ConfigError",
    "RunManifest",
    "ScenarioConfig",
    "format_config",
    "parse_config",
    "preset_config",
    "run_scenario",
    "run_sweep",
    "verify_manifest",
]
