"""Low regularity and exponential integrators for Allen-Cahn type equations."""

from ._core import (  # noqa: F401
    Grid,
    Potential,
    Propagator,
    StabilityBounds,
    Stepper,
    apply_laplacian,
    compute_bounds,
    convergence_rates,
    dense_laplacian_1d,
    discrete_energy,
    double_well,
    error_norms,
    flory_huggins,
    operator_inf_norm,
    phi,
    random_field,
    run_coarsening,
    run_convergence,
    stabilized_map,
    traveling_wave,
)

__all__ = [
    "Grid",
    "Potential",
    "Propagator",
    "StabilityBounds",
    "Stepper",
    "apply_laplacian",
    "compute_bounds",
    "convergence_rates",
    "dense_laplacian_1d",
    "discrete_energy",
    "double_well",
    "error_norms",
    "flory_huggins",
    "operator_inf_norm",
    "phi",
    "random_field",
    "run_coarsening",
    "run_convergence",
    "stabilized_map",
    "traveling_wave",
]
