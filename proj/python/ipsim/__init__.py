"""Simulation of finite-range interacting particle systems on the lattice and
in the continuum, driven by per-site Poisson event streams, with Monte Carlo
drivers for spatial law-of-large-numbers and central-limit checks."""

from ipsim._core import (
    IpsError,
    Model,
    NeighborhoodTemplate,
    Window,
    build_model,
    check_window_sequence,
    cluster_tail,
    coupling_check,
    estimate_sigma,
    exterior_boundary,
    interior,
    list_functionals,
    list_models,
    neighborhood,
    oracle_compare,
    registry_listing,
    run_clt,
    run_lln,
    simulate_heights,
    simulate_points,
    two_neighborhood,
    validate_config,
)

__all__ = [
    "IpsError",
    "Model",
    "NeighborhoodTemplate",
    "Window",
    "build_model",
    "check_window_sequence",
    "cluster_tail",
    "coupling_check",
    "estimate_sigma",
    "exterior_boundary",
    "interior",
    "list_functionals",
    "list_models",
    "neighborhood",
    "oracle_compare",
    "registry_listing",
    "run_clt",
    "run_lln",
    "simulate_heights",
    "simulate_points",
    "two_neighborhood",
    "validate_config",
]

__version__ = "0.1.0"
