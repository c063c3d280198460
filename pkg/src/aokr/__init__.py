"""Classical, pendulum-scaling and quantum simulation of the atom-optics kicked
rotor near vanishing kicking period."""

__version__ = "0.1.0"

from .params import (
    EnergyCurve,
    EnergyScan,
    InitialEnsembleSpec,
    KickParams,
)
from .classical import (
    ClassicalEnsemble,
    ClassicalState,
    energy_vs_tau_scan,
    ensemble_energy_curve,
    evolve_trajectory,
    map_step,
    phase_portrait,
    sample_initial_ensemble,
)
from .pendulum import (
    ScaledPendulumState,
    ScalingFunctionTable,
    frozen_limit,
    pendulum_orbit,
    quadratic_limit,
    resonant_energy_prediction,
    saturation_level,
    scaling_function,
)
from .quantum import (
    BasisOverflowError,
    RotorWavefunction,
    apply_free_evolution,
    apply_kick,
    choose_basis_size,
    init_plane_wave,
    propagate,
    quantum_ensemble_energy,
    quantum_energy_scan,
)
from .analysis import (
    MomentumHistogram,
    curve_deviation,
    peak_half_width,
    saturation_kick,
    truncated_second_moment,
)
from .units import PhysicalConstants, convert_period

__all__ = [
    "BasisOverflowError",
    "ClassicalEnsemble",
    "ClassicalState",
    "EnergyCurve",
    "EnergyScan",
    "InitialEnsembleSpec",
    "KickParams",
    "MomentumHistogram",
    "PhysicalConstants",
    "RotorWavefunction",
    "ScaledPendulumState",
    "ScalingFunctionTable",
    "apply_free_evolution",
    "apply_kick",
    "choose_basis_size",
    "convert_period",
    "curve_deviation",
    "energy_vs_tau_scan",
    "ensemble_energy_curve",
    "evolve_trajectory",
    "frozen_limit",
    "init_plane_wave",
    "map_step",
    "peak_half_width",
    "pendulum_orbit",
    "phase_portrait",
    "propagate",
    "quadratic_limit",
    "quantum_energy_scan",
    "quantum_ensemble_energy",
    "resonant_energy_prediction",
    "sample_initial_ensemble",
    "saturation_kick",
    "saturation_level",
    "scaling_function",
    "truncated_second_moment",
]
