"""Classical-vs-quantum harmonic oscillator statistics in thermal radiation
with zero-point energy: exact analytic oracles, a symbolic canonical
algebra with Gaussian-state expectations, a Langevin simulator, and direct
Monte Carlo phase-space estimators, all cross-validated."""

__version__ = "0.1.0"

from .model import OscillatorParams, ThermalState, coth_theta, mode_energy
from .oracles import (
    TheorySide,
    QuantitySpec,
    boltzmann_sum,
    classical_variance_p,
    classical_variance_x,
    energy_mean,
    energy_second_moment,
    gaussian_moment,
    ground_density_x,
    L2_component_mean,
    L2_mean,
    partition_function,
    phase_density,
)
from .estimates import EstimateRow, EstimateTable
from .sampling import PhaseSample, draw_phase_space, energy_law_test, estimate, estimate_chunked
from .noise import NoiseSpec, force_psd, synthesize_colored, white_noise_strength
from .langevin import (
    SimConfig,
    Trajectory,
    equilibrium_report,
    run,
    step_exact,
    transition,
)

__all__ = [
    "__version__",
    "OscillatorParams", "ThermalState", "coth_theta", "mode_energy",
    "TheorySide", "QuantitySpec", "gaussian_moment",
    "classical_variance_x", "classical_variance_p",
    "energy_mean", "energy_second_moment", "L2_mean", "L2_component_mean",
    "partition_function", "boltzmann_sum", "phase_density", "ground_density_x",
    "EstimateRow", "EstimateTable",
    "PhaseSample", "draw_phase_space", "estimate", "estimate_chunked",
    "energy_law_test",
    "NoiseSpec", "white_noise_strength", "force_psd", "synthesize_colored",
    "SimConfig", "Trajectory", "run", "step_exact", "transition",
    "equilibrium_report",
]
