"""Named right-hand sides and the benchmark problem set.

Right-hand sides are chosen by name:

    zero                  f = 0
    one-plus-cos-pi       f = 1 + cos(pi x), boundary data supplied by the caller
    manufactured-1mx2sq   exact u = (1 - x^2)^2
    manufactured-cospi    exact u = cos(pi x)
    manufactured-x3p1     exact u = x^3 + 1

For manufactured names the forcing and both boundary values are computed in
closed form from the exact solution, so g1/g2 arguments are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import BCKind, DerivKind, ProblemSpec
from .errors import ConfigurationError
from .fracbasis import solve_mu_nu
from .manufactured import ManufacturedSolution

__all__ = ["RHS_NAMES", "manufactured_solution", "make_spec", "Benchmark", "BENCHMARKS",
           "benchmark_specs"]

RHS_NAMES = ("zero", "one-plus-cos-pi", "manufactured-1mx2sq", "manufactured-cospi",
             "manufactured-x3p1")


def _one_plus_cos(x):
    return 1.0 + np.cos(np.pi * np.asarray(x, dtype=float))


def _zero(x):
    return np.zeros(np.shape(x))


def manufactured_solution(name: str) -> ManufacturedSolution:
    if name == "manufactured-1mx2sq":
        return ManufacturedSolution.from_polynomial("1mx2sq", [1.0, 0.0, -2.0, 0.0, 1.0])
    if name == "manufactured-x3p1":
        return ManufacturedSolution.from_polynomial("x3p1", [1.0, 0.0, 0.0, 1.0])
    if name == "manufactured-cospi":
        return ManufacturedSolution.cos_pi()
    raise ConfigurationError(f"{name!r} is not a manufactured solution")


def make_spec(alpha: float, p: float, c: float, bc, rhs_name: str = "zero",
              g1: float = 0.0, g2: float = 0.0, weight=None) -> ProblemSpec:
    """ProblemSpec from a registry name; manufactured names fill in f, g1, g2 and u."""
    bc = BCKind(bc)
    if rhs_name not in RHS_NAMES:
        raise ConfigurationError(f"unknown right-hand side {rhs_name!r}; choose from {', '.join(RHS_NAMES)}")
    if rhs_name == "zero":
        return ProblemSpec(alpha, p, c, bc, g1, g2, _zero, weight, rhs_name=rhs_name)
    if rhs_name == "one-plus-cos-pi":
        return ProblemSpec(alpha, p, c, bc, g1, g2, _one_plus_cos, weight, rhs_name=rhs_name)
    sol = manufactured_solution(rhs_name)
    frac = solve_mu_nu(alpha, p)
    caputo = bc.deriv_kind is DerivKind.CAPUTO
    forcing = sol.forcing(frac, c, caputo)
    if bc is BCKind.FDBC:
        data = sol.rl_potential(frac)
    elif bc is BCKind.CLASSICAL_DIRICHLET:
        data = sol.as_power_sum()
    else:
        data = sol.flux(frac, caputo)
    return ProblemSpec(alpha, p, c, bc, data.endpoint(-1), data.endpoint(1), forcing, weight,
                       rhs_name=rhs_name, exact=sol.exact)


@dataclass(frozen=True)
class Benchmark:
    """One benchmark family: a boundary type with its two cases."""

    key: str
    bc: BCKind
    c_values: tuple
    case1_rhs: str
    case2_g: tuple
    p: float = 0.8
    alphas: tuple = (1.2, 1.8)


BENCHMARKS = {
    "ex1": Benchmark("ex1", BCKind.FDBC, (0.0, 1.0), "manufactured-1mx2sq", (2.0, 1.0)),
    "ex2": Benchmark("ex2", BCKind.RL_FNBC, (1.0,), "manufactured-1mx2sq", (2.0, 1.0)),
    "ex3": Benchmark("ex3", BCKind.CLASSICAL_DIRICHLET, (0.0,), "manufactured-cospi", (1.0, 2.0)),
    "ex4": Benchmark("ex4", BCKind.CAPUTO_FNBC, (1.0,), "manufactured-x3p1", (1.0, 2.0)),
}


def benchmark_specs(key: str, case: int, alpha: float, c: float | None = None) -> ProblemSpec:
    """Case 1: manufactured exact solution; case 2: f = 1 + cos(pi x) with fixed data."""
    bench = BENCHMARKS[key]
    c = bench.c_values[0] if c is None else c
    if case == 1:
        return make_spec(alpha, bench.p, c, bench.bc, bench.case1_rhs)
    if case == 2:
        g1, g2 = bench.case2_g
        return make_spec(alpha, bench.p, c, bench.bc, "one-plus-cos-pi", g1, g2)
    raise ConfigurationError("case must be 1 or 2")
