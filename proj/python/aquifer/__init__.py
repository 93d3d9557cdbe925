"""Mixed finite element groundwater flow and contaminant transport."""

from ._core import (
    BoundaryMode,
    DispersionParams,
    Isotherm,
    Mesh,
    TransportParams,
    bound_constants,
    build_structured_mesh,
    cfl_timestep,
    discrete_h1_norm,
    dispersion_inv,
    dispersion_sqrt,
    dispersion_tensor,
    load_mesh,
    parse_mesh,
    project_P_h,
    run_scenario,
    run_suites,
    run_transport,
    solvability_threshold,
    solve_darcy,
)

__all__ = [
    "BoundaryMode",
    "DispersionParams",
    "Isotherm",
    "Mesh",
    "TransportParams",
    "bound_constants",
    "build_structured_mesh",
    "cfl_timestep",
    "discrete_h1_norm",
    "dispersion_inv",
    "dispersion_sqrt",
    "dispersion_tensor",
    "load_mesh",
    "parse_mesh",
    "project_P_h",
    "run_scenario",
    "run_suites",
    "run_transport",
    "solvability_threshold",
    "solve_darcy",
]
