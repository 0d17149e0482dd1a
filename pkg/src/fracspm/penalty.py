"""Penalty parameters and penalty functions for the four boundary families.

Only the products rho_+/- Q_N^+/- enter the discrete systems. The split into
a parameter and an O(1)-normalized function follows the usual scalings:

    R-L FDBC       rho_- = N^{2+q-b},  rho_+ = N^{2+q-a},  q = max(a, b) + 2
    R-L FNBC       rho_- = N^{2 mu + 2},  rho_+ = N^{2 nu + 2}
    Caputo FNBC    rho_+/- = N^2
    Caputo DBC     rho_+/- = N^3   (heuristic; no coercivity proof is known)

where (a, b) are the exponents of the inner-product weight.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError
from .fracbasis import FracParams
from .specialfn import (
    JacobiParams,
    JacobiSeries,
    gamma,
    gamma_ratio,
    jacobi_deriv_coeff,
    jacobi_endpoint,
    jacobi_endpoints,
    jacobi_norm,
)

__all__ = [
    "Representation",
    "PenaltyConfig",
    "fdbc_boundary_polynomials",
    "penalty_rl_fdbc",
    "penalty_rl_fnbc",
    "rl_fnbc_modal",
    "penalty_caputo_fnbc",
    "penalty_caputo_dbc",
]


class Representation(enum.Enum):
    JACOBI_MODAL = "jacobi-modal"
    SINGULAR_WEIGHTED = "singular-weighted"
    LEGENDRE_MODAL = "legendre-modal"


@dataclass(frozen=True, eq=False)
class PenaltyConfig:
    """Penalty parameters rho_+/- and penalty functions Q_N^+/-."""

    rho_minus: float
    rho_plus: float
    q_minus: JacobiSeries
    q_plus: JacobiSeries
    representation: Representation

    def __post_init__(self):
        for name in ("rho_minus", "rho_plus"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val >= 0.0):
                raise ConfigurationError(f"{name} must be finite and non-negative, got {val}")

    @property
    def qminus_coeffs(self) -> np.ndarray:
        return self.q_minus.coeffs

    @property
    def qplus_coeffs(self) -> np.ndarray:
        return self.q_plus.coeffs

    def product(self, side: int) -> JacobiSeries:
        """rho Q as a single series (the only combination that enters A)."""
        if side == -1:
            return self.q_minus.scaled(self.rho_minus)
        if side == 1:
            return self.q_plus.scaled(self.rho_plus)
        raise ConfigurationError(f"side must be +1 or -1, got {side!r}")

    def with_multiplier(self, multiplier: float) -> PenaltyConfig:
        """Scale both parameters and keep the penalty functions fixed."""
        return replace(self, rho_minus=self.rho_minus * multiplier,
                       rho_plus=self.rho_plus * multiplier)

    def resplit(self, s: float) -> PenaltyConfig:
        """(s rho, Q/s): the same products under a different split."""
        return PenaltyConfig(self.rho_minus * s, self.rho_plus * s, self.q_minus.scaled(1.0 / s),
                             self.q_plus.scaled(1.0 / s), self.representation)


def _check_N(N: int):
    if N < 2:
        raise ConfigurationError(f"N must be at least 2, got {N}")


def fdbc_boundary_polynomials(N: int, weight) -> tuple[JacobiSeries, JacobiSeries]:
    """P_N^-, P_N^+ of degree N+2 in the weight's Jacobi family.

    P_N^- = (1-x) P_{N+1}^{a+1,b}(x) / (2 P_{N+1}^{a+1,b}(-1)) equals 1 at -1
    and 0 at +1; P_N^+ = (1+x) P_{N+1}^{a,b+1}(x) / (2 P_{N+1}^{a,b+1}(1)) is
    its mirror. Both are orthogonal to every polynomial of degree <= N-1 with
    respect to w^{a,b} after two differentiations in the scheme.
    """
    w = weight if isinstance(weight, JacobiParams) else JacobiParams(*weight)
    a, b = w.a, w.b
    n = N + 1
    denom = 2.0 * n + a + b + 2.0
    cm = np.zeros(N + 3)
    pm = jacobi_endpoint(n, (a + 1.0, b), -1)
    cm[n] = (n + a + 1.0) / (pm * denom)
    cm[n + 1] = -(n + 1.0) / (pm * denom)
    cp = np.zeros(N + 3)
    pp = jacobi_endpoint(n, (a, b + 1.0), 1)
    cp[n] = (n + b + 1.0) / (pp * denom)
    cp[n + 1] = (n + 1.0) / (pp * denom)
    return JacobiSeries(cm, w), JacobiSeries(cp, w)


def _second_derivative(series: JacobiSeries) -> JacobiSeries:
    n = np.arange(2, series.degree + 1)
    c = series.coeffs[2:] * np.array([jacobi_deriv_coeff(int(k), 2, series.params) for k in n])
    return JacobiSeries(c, series.params.shifted(2.0))


def penalty_rl_fdbc(N: int, alpha: float, weight=None) -> PenaltyConfig:
    """Fractional Dirichlet penalty: rho Q = D^2 P_N^+/-.

    The default weight is (alpha/2, alpha/2).
    """
    _check_N(N)
    if weight is None:
        weight = JacobiParams(alpha / 2.0, alpha / 2.0)
    w = weight if isinstance(weight, JacobiParams) else JacobiParams(*weight)
    if not (-1.0 < w.a < 1.0 and -1.0 < w.b < 1.0):
        raise ConfigurationError("FDBC penalty needs weight exponents in (-1, 1)")
    pm, pp = fdbc_boundary_polynomials(N, w)
    q = max(w.a, w.b) + 2.0
    rho_minus = float(N) ** (2.0 + q - w.b)
    rho_plus = float(N) ** (2.0 + q - w.a)
    return PenaltyConfig(rho_minus, rho_plus, _second_derivative(pm).scaled(1.0 / rho_minus),
                         _second_derivative(pp).scaled(1.0 / rho_plus),
                         Representation.JACOBI_MODAL)


def _fnbc_h(N: int, nu: float, mu: float) -> tuple[float, float]:
    scale = 2.0 ** (-nu - mu - 1.0)
    h = scale * gamma_ratio(N + nu + mu + 2.0, N + mu + 1.0) / gamma(nu + 1.0)
    ht = (-1.0) ** N * scale * gamma_ratio(N + nu + mu + 2.0, N + nu + 1.0) / gamma(mu + 1.0)
    return float(h), float(ht)


def penalty_rl_fnbc(N: int, frac: FracParams) -> PenaltyConfig:
    """Fractional Neumann penalty (unweighted inner products), closed form.

    rho_+ Q_N^+ = w^{nu,mu}(x) h_N P_N^{nu+1,mu}(x) and
    rho_- Q_N^- = -w^{nu,mu}(x) ht_N P_N^{nu,mu+1}(x): the reproducing kernels
    of the image space at x = +1 and x = -1.
    """
    if N < 0:
        raise ConfigurationError("N must be non-negative")
    mu, nu = frac.mu, frac.nu
    h, ht = _fnbc_h(N, nu, mu)
    rho_minus = float(max(N, 1)) ** (2.0 * mu + 2.0)
    rho_plus = float(max(N, 1)) ** (2.0 * nu + 2.0)
    onehot = np.zeros(N + 1)
    onehot[N] = 1.0
    qm = JacobiSeries(-ht / rho_minus * onehot, (nu, mu + 1.0), (nu, mu))
    qp = JacobiSeries(h / rho_plus * onehot, (nu + 1.0, mu), (nu, mu))
    return PenaltyConfig(rho_minus, rho_plus, qm, qp, Representation.SINGULAR_WEIGHTED)


def rl_fnbc_modal(N: int, frac: FracParams) -> PenaltyConfig:
    """Same penalty as penalty_rl_fnbc, as a sum over J_k^{-nu,-mu}."""
    mu, nu = frac.mu, frac.nu
    k = np.arange(N + 1)
    gam = jacobi_norm(k, (nu, mu))
    at_plus = jacobi_endpoints(N, (nu, mu), 1)
    at_minus = jacobi_endpoints(N, (nu, mu), -1)
    rho_minus = float(max(N, 1)) ** (2.0 * mu + 2.0)
    rho_plus = float(max(N, 1)) ** (2.0 * nu + 2.0)
    qm = JacobiSeries(-at_minus / gam / rho_minus, (nu, mu), (nu, mu))
    qp = JacobiSeries(at_plus / gam / rho_plus, (nu, mu), (nu, mu))
    return PenaltyConfig(rho_minus, rho_plus, qm, qp, Representation.JACOBI_MODAL)


def _legendre_kernel(N: int, side: int) -> np.ndarray:
    k = np.arange(N + 1)
    return float(side) ** k * (2.0 * k + 1.0) / 2.0


def penalty_caputo_fnbc(N: int) -> PenaltyConfig:
    """Caputo fractional Neumann penalty: Q^+/- = +/- K_N(x, +/-1) / N^2, rho = N^2."""
    _check_N(N)
    rho = float(N) ** 2
    qm = JacobiSeries(-_legendre_kernel(N, -1) / rho, (0.0, 0.0))
    qp = JacobiSeries(_legendre_kernel(N, 1) / rho, (0.0, 0.0))
    return PenaltyConfig(rho, rho, qm, qp, Representation.LEGENDRE_MODAL)


def penalty_caputo_dbc(N: int) -> PenaltyConfig:
    """Classical Dirichlet penalty for the Caputo problem: Q^+/- = K_N(x, +/-1)/N^2, rho = N^3.

    The O(N^3) scaling is a heuristic; coercivity is checked numerically only.
    """
    _check_N(N)
    qm = JacobiSeries(_legendre_kernel(N, -1) / float(N) ** 2, (0.0, 0.0))
    qp = JacobiSeries(_legendre_kernel(N, 1) / float(N) ** 2, (0.0, 0.0))
    rho = float(N) ** 3
    return PenaltyConfig(rho, rho, qm, qp, Representation.LEGENDRE_MODAL)
