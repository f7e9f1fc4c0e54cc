"""Interior penalty DG for Poisson and biharmonic problems on curved disk meshes."""

from ._curveddg import (
    DomainError,
    Error,
    InvalidParameterError,
    PenaltyConfig,
    Problem,
    biharmonic_exact,
    biharmonic_rhs,
    disk_mesh,
    eoc,
    loglog_slope,
    mesh_metrics,
    mesh_text,
    poisson_exact,
    poisson_rhs,
    run_convergence,
    triangle_rule,
    verify_inequalities,
)

__all__ = [
    "DomainError",
    "Error",
    "InvalidParameterError",
    "PenaltyConfig",
    "Problem",
    "biharmonic_exact",
    "biharmonic_rhs",
    "disk_mesh",
    "eoc",
    "loglog_slope",
    "mesh_metrics",
    "mesh_text",
    "poisson_exact",
    "poisson_rhs",
    "run_convergence",
    "triangle_rule",
    "verify_inequalities",
]
