"""Numerical laboratory for mean-energy laws of charged resonators.

The forward route maps a one-oscillator energy-weight density w to the
mean energy Y as a function of the canonical parameter alpha, both by
exact microcanonical sums and by the saddle-point asymptotics that
agree with them as the system grows. The lattice (Dirac comb) density
reproduces the blackbody spectral law; a constant density reproduces
equipartition and a divergent total energy. The inverse route recovers
w from sampled Y(alpha) by regularized nonnegative deconvolution and
reports whether the recovered density is concentrated on a lattice and
keeps mass at the origin.
"""

__version__ = "0.1.0"

from .density import (
    AlphaGrid,
    Comb,
    ConstDensity,
    EnergyCurve,
    EnsembleConfig,
    ExpDensity,
    Mixture,
    PhysicalConstants,
    REDUCED,
    Tabulated,
    WeightDensity,
    alpha_grid,
    comb,
    config_from_beta,
    const_density,
    continuous_density,
    cumulative_mass,
    energy_curve,
    exp_density,
    load_curve_csv,
    load_table_csv,
    mixture,
    parse_density,
    scale_density,
    stretch_density,
    tabulated,
    unit_comb,
    validate,
)
from .ensemble import (
    ConvergenceRow,
    MicrocanonicalResult,
    SpectralPoint,
    convergence_study,
    exact_mean_energies,
    log_sum_exp,
    phi_convolution,
    planck_entropy,
    planck_u,
    wien_temperature,
)
from .errors import (
    ComputationError,
    DegenerateDensityError,
    NoSaddleError,
    NoStatesError,
)
from .inverse import (
    DetectedAtom,
    DivergenceVerdict,
    Reconstruction,
    SingularityVerdict,
    detect_atoms,
    reconstruct_log_phi,
    reconstruct_weight,
    reconstruction_to_density,
    singularity_test,
    total_energy_divergence,
)
from .transform import (
    SaddleSolution,
    ThetaPoint,
    asymptotic_energies,
    energy_curve_on_grid,
    log_phi,
    mean_resonator_energy,
    phi,
    phi_prime,
    solve_saddle,
    theta,
)

__all__ = [
    "AlphaGrid",
    "Comb",
    "ComputationError",
    "ConstDensity",
    "ConvergenceRow",
    "DegenerateDensityError",
    "DetectedAtom",
    "DivergenceVerdict",
    "EnergyCurve",
    "EnsembleConfig",
    "ExpDensity",
    "MicrocanonicalResult",
    "Mixture",
    "NoSaddleError",
    "NoStatesError",
    "PhysicalConstants",
    "REDUCED",
    "Reconstruction",
    "SaddleSolution",
    "SingularityVerdict",
    "SpectralPoint",
    "Tabulated",
    "ThetaPoint",
    "WeightDensity",
    "alpha_grid",
    "asymptotic_energies",
    "comb",
    "config_from_beta",
    "const_density",
    "continuous_density",
    "convergence_study",
    "cumulative_mass",
    "detect_atoms",
    "energy_curve",
    "energy_curve_on_grid",
    "exact_mean_energies",
    "exp_density",
    "load_curve_csv",
    "load_table_csv",
    "log_phi",
    "log_sum_exp",
    "mean_resonator_energy",
    "mixture",
    "parse_density",
    "phi",
    "phi_convolution",
    "phi_prime",
    "planck_entropy",
    "planck_u",
    "reconstruct_log_phi",
    "reconstruct_weight",
    "reconstruction_to_density",
    "scale_density",
    "singularity_test",
    "solve_saddle",
    "stretch_density",
    "tabulated",
    "theta",
    "total_energy_divergence",
    "unit_comb",
    "validate",
    "wien_temperature",
    "__version__",
]
