"""Spectral penalty (SPM) and Petrov-Galerkin tau solvers for conservative
two-sided fractional boundary-value problems on (-1, 1).

Typical use::

    from fracspm import benchmark_specs, solve, linf_error
    spec = benchmark_specs("ex1", case=1, alpha=1.5)
    u = solve(spec, 32)
    linf_error(u, spec.exact)
"""
from .assembly import (
    BCKind,
    DerivKind,
    LinearSystem,
    Method,
    ProblemSpec,
    assemble,
    assemble_pgs_tau,
    assemble_spm_caputo,
    assemble_spm_rl,
    default_penalty,
)
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DomainError,
    FracSpmError,
    PoleError,
    SingularMatrixError,
)
from .experiments import (
    ERROR_GRID,
    ConvergenceReport,
    ConvergenceRow,
    DiffusionRun,
    EigenRow,
    convergence_sweep,
    diffusion_run,
    eigen_sweep,
    linf_error,
    penalty_sweep,
    reference_solution,
    solve,
    tent,
)
from .fracbasis import (
    BasisDescriptor,
    BasisKind,
    FracParams,
    SolutionExpansion,
    solve_mu_nu,
)
from .linalg import EigenSummary, eigenvalues, lu_factor, lu_solve
from .penalty import PenaltyConfig
from .problems import BENCHMARKS, RHS_NAMES, benchmark_specs, make_spec
from .specialfn import JacobiParams, QuadratureRule, gamma, gauss_jacobi, jacobi_eval

__version__ = "0.1.0"

__all__ = [
    "BCKind", "DerivKind", "LinearSystem", "Method", "ProblemSpec", "assemble",
    "assemble_pgs_tau", "assemble_spm_caputo", "assemble_spm_rl", "default_penalty",
    "ConfigurationError", "ConvergenceError", "DomainError", "FracSpmError", "PoleError",
    "SingularMatrixError", "ERROR_GRID", "ConvergenceReport", "ConvergenceRow", "DiffusionRun",
    "EigenRow", "convergence_sweep", "diffusion_run", "eigen_sweep", "linf_error", "penalty_sweep",
    "reference_solution", "solve", "tent", "BasisDescriptor", "BasisKind", "FracParams",
    "SolutionExpansion", "solve_mu_nu", "EigenSummary", "eigenvalues", "lu_factor", "lu_solve",
    "PenaltyConfig", "BENCHMARKS", "RHS_NAMES", "benchmark_specs", "make_spec", "JacobiParams",
    "QuadratureRule", "gamma", "gauss_jacobi", "jacobi_eval",
]
