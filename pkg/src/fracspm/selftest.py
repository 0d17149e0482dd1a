"""Seeded randomized checks of the numerical kernels, used by ``fracspm selftest``.

Each check draws its parameters from ``numpy.random.default_rng(seed)`` and
compares against an independent reference (closed-form moments, adaptive
quadrature with algebraic end weights, or a residual).
"""
from __future__ import annotations

from math import comb
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from .assembly import BCKind
from .experiments import linf_error, solve
from .fracbasis import BasisDescriptor, apply_I_2ma, solve_mu_nu
from .linalg import eigenvalues, lu_factor
from .problems import make_spec
from .specialfn import gamma, gauss_jacobi, jacobi_eval, jacobi_weight_integral

__all__ = ["CheckResult", "run_selftest", "fractional_integral_quad"]


class CheckResult(NamedTuple):
    name: str
    passed: bool
    value: float
    tolerance: float


def _result(name, value, tol) -> CheckResult:
    value = float(value)
    return CheckResult(name, bool(np.isfinite(value) and value <= tol), value, tol)


def fractional_integral_quad(f_smooth, wa: float, wb: float, x: float, order: float, side: str) -> float:
    """Fractional integral of order ``order`` of (1-t)^wa (1+t)^wb f_smooth(t) at x.

    Adaptive quadrature with the kernel and one end weight folded into QUADPACK's
    algebraic weight, so both singularities are handled exactly.
    """
    if side == "left":
        val, _ = quad(lambda t: (1.0 - t) ** wa * f_smooth(t), -1.0, x, weight="alg",
                      wvar=(wb, order - 1.0), epsabs=1e-14, epsrel=1e-13, limit=200)
    else:
        val, _ = quad(lambda t: (1.0 + t) ** wb * f_smooth(t), x, 1.0, weight="alg",
                      wvar=(order - 1.0, wa), epsabs=1e-14, epsrel=1e-13, limit=200)
    return val / gamma(order)


def _check_quadrature(rng) -> list[CheckResult]:
    a, b = rng.uniform(-0.9, 2.0, size=2)
    n = int(rng.integers(5, 200))
    rule = gauss_jacobi(n, (a, b))
    exact = jacobi_weight_integral((a, b))
    out = [_result(f"quadrature weight sum n={n} (a,b)=({a:.3f},{b:.3f})",
                   abs(rule.weights.sum() - exact) / exact, 1e-12)]
    rule = gauss_jacobi(8, (a, b))
    worst = 0.0
    for m in range(16):
        # x^m = ((1+x) - 1)^m expanded, each term a Beta integral
        ref = sum(comb(m, j) * (-1.0) ** (m - j) * jacobi_weight_integral((a, b + j)) for j in range(m + 1))
        scale = sum(comb(m, j) * jacobi_weight_integral((a, b + j)) for j in range(m + 1))
        worst = max(worst, abs(rule.integrate(rule.nodes ** m) - ref) / scale)
    out.append(_result("quadrature moments m<=15, 8-point rule", worst, 1e-12))
    return out


def _check_gamma(rng) -> CheckResult:
    x = rng.uniform(0.01, 0.99, size=8)
    err = max(abs(gamma(t) * gamma(1.0 - t) * np.sin(np.pi * t) / np.pi - 1.0) for t in x)
    return _result("gamma reflection", err, 1e-12)


def _check_lu(rng) -> CheckResult:
    n = 50
    a = rng.standard_normal((n, n)) + n * np.eye(n)
    b = rng.standard_normal(n)
    x = lu_factor(a).solve(b)
    scale = np.abs(a).sum(axis=1).max() * np.abs(x).max() + np.abs(b).max()
    return _result("LU residual 50x50", np.abs(a @ x - b).max() / scale, 1e-10)


def _check_trace(rng) -> CheckResult:
    a = rng.standard_normal((30, 30))
    ev = eigenvalues(a).eigenvalues
    return _result("eigenvalue trace identity", abs(ev.real.sum() - np.trace(a)) / np.abs(a).sum(), 1e-8)


def _check_spectral(rng) -> CheckResult:
    alpha = float(rng.uniform(1.1, 1.9))
    p = float(rng.uniform(0.05, 0.95))
    k = int(rng.integers(0, 7))
    frac = solve_mu_nu(alpha, p)
    mu, nu = frac.mu, frac.nu
    img = apply_I_2ma(BasisDescriptor.poly_fractonomial(max(k, 2), frac), k)
    xs = rng.uniform(-0.95, 0.95, size=4)
    worst = 0.0
    for x in xs:
        f = lambda t: jacobi_eval(k, (mu, nu), t)
        left = fractional_integral_quad(f, mu, nu, x, 2.0 - alpha, "left")
        right = fractional_integral_quad(f, mu, nu, x, 2.0 - alpha, "right")
        ref = frac.c_alpha_p * (p * left + (1.0 - p) * right)
        val = float(img(np.array([x]))[0])
        worst = max(worst, abs(val - ref) / max(1.0, abs(ref)))
    return _result(f"spectral relation alpha={alpha:.3f} p={p:.3f} k={k}", worst, 1e-8)


def _check_exactness(rng) -> CheckResult:
    alpha = float(rng.uniform(1.1, 1.9))
    bc = (BCKind.CLASSICAL_DIRICHLET, BCKind.CAPUTO_FNBC)[int(rng.integers(0, 2))]
    c = 0.0 if bc is BCKind.CLASSICAL_DIRICHLET else 1.0
    spec = make_spec(alpha, 0.8, c, bc, "manufactured-x3p1")
    err = linf_error(solve(spec, 8), spec.exact)
    return _result(f"cubic exactness {bc.value} alpha={alpha:.3f}", err, 1e-10)


def run_selftest(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = _check_quadrature(rng)
    results += [_check_gamma(rng), _check_lu(rng), _check_trace(rng), _check_spectral(rng),
                _check_exactness(rng)]
    return results
