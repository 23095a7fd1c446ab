"""Stencil-size experiments for PHS RBF-FD discretizations."""

from ._core import (
    ConfigError,
    Error,
    InputError,
    SingularityError,
    SolverError,
    StageError,
    __version__,
    best_minimum_contrast,
    contains,
    domain_names,
    fit_convergence,
    local_extrema,
    nodes,
    preset_names,
    quality,
    repro,
    run,
    sign_balance,
    slope_sign_changes,
    sweep,
    weights,
)

__all__ = [
    "ConfigError",
    "Error",
    "InputError",
    "SingularityError",
    "SolverError",
    "StageError",
    "__version__",
    "best_minimum_contrast",
    "contains",
    "domain_names",
    "fit_convergence",
    "local_extrema",
    "nodes",
    "preset_names",
    "quality",
    "repro",
    "run",
    "sign_balance",
    "slope_sign_changes",
    "sweep",
    "weights",
]
