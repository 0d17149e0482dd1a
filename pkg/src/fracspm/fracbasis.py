"""Poly-fractonomial and Legendre bases and their fractional-calculus images.

A poly-fractonomial is

    J_n^{-mu,-nu}(x) = (1-x)^mu (1+x)^nu P_n^{mu,nu}(x),

with (mu, nu) tied to the fractional order alpha and the left/right mixing
weight p so that the two-sided fractional integral of order 2-alpha maps
J_n^{-mu,-nu} onto a single Jacobi polynomial P_n^{nu,mu}.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, DomainError
from .specialfn import (
    JacobiParams,
    JacobiSeries,
    gamma,
    gamma_ratio,
    jacobi_table,
)

__all__ = [
    "FracParams",
    "solve_mu_nu",
    "BasisKind",
    "BasisDescriptor",
    "SolutionExpansion",
    "fractonomial_eval",
    "apply_I_2ma",
    "apply_D_frac",
    "lambda_coeff",
    "flux_coeff",
    "CaputoImage",
    "caputo_legendre_deriv",
    "fractonomial_integral_coeffs",
    "MonomialOp",
    "frac_monomial_calculus",
]

_BISECT_MAX_ITER = 200
_BISECT_TOL = 1e-14


@dataclass(frozen=True)
class FracParams:
    """Fractional order, mixing weight and the matching exponents (mu, nu)."""

    alpha: float
    p: float
    mu: float
    nu: float
    c_alpha_p: float

    @property
    def trial_params(self) -> JacobiParams:
        """Indices (mu, nu) of the Jacobi factor inside J_n^{-mu,-nu}."""
        return JacobiParams(self.mu, self.nu)

    @property
    def image_params(self) -> JacobiParams:
        """Indices (nu, mu) of the polynomial image of the fractional integral."""
        return JacobiParams(self.nu, self.mu)

    def residual(self) -> float:
        return self.p * math.sin(math.pi * self.mu) - (1.0 - self.p) * math.sin(math.pi * self.nu)


def _c_alpha_p(alpha, mu, nu):
    return (math.sin(math.pi * mu) + math.sin(math.pi * nu)) / math.sin(math.pi * alpha)


def solve_mu_nu(alpha: float, p: float) -> FracParams:
    """Exponents (mu, nu) with mu + nu = alpha - 2 and p sin(pi mu) = (1-p) sin(pi nu).

    Bisection in mu over (alpha-2, 0). The one-sided limits are p = 1 ->
    (0, alpha-2) (left operator, singular factor at x = -1) and p = 0 ->
    (alpha-2, 0); both satisfy the constraint and are the limits of the
    interior roots.
    """
    if not 1.0 < alpha < 2.0:
        raise ConfigurationError(f"alpha must lie in (1, 2), got {alpha}")
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"p must lie in [0, 1], got {p}")
    s = alpha - 2.0
    if p == 1.0:
        mu, nu = 0.0, s
    elif p == 0.0:
        mu, nu = s, 0.0
    elif p == 0.5:
        mu = nu = 0.5 * s
    else:
        def g(m):
            return p * math.sin(math.pi * m) - (1.0 - p) * math.sin(math.pi * (s - m))

        # g(s) = p sin(pi s) < 0 and g(0) = -(1-p) sin(pi s) > 0 bracket the root
        lo, hi = s, 0.0
        glo = g(lo)
        for _ in range(_BISECT_MAX_ITER):
            mid = 0.5 * (lo + hi)
            gm = g(mid)
            if gm == 0.0:
                lo = hi = mid
                break
            if (gm < 0) == (glo < 0):
                lo, glo = mid, gm
            else:
                hi = mid
            if hi - lo <= _BISECT_TOL:
                break
        mu = 0.5 * (lo + hi)
        nu = s - mu
    return FracParams(alpha, p, mu, nu, _c_alpha_p(alpha, mu, nu))


class BasisKind(enum.Enum):
    POLY_FRACTONOMIAL = "poly-fractonomial"
    LEGENDRE = "legendre"


@dataclass(frozen=True)
class BasisDescriptor:
    """Trial/test basis: J_0..J_N^{-mu,-nu} or L_0..L_N."""

    kind: BasisKind
    N: int
    frac: FracParams | None = None

    def __post_init__(self):
        if self.N < 2:
            raise ConfigurationError(f"N must be at least 2, got {self.N}")
        if self.kind is BasisKind.POLY_FRACTONOMIAL and self.frac is None:
            raise ConfigurationError("poly-fractonomial basis needs FracParams")

    @classmethod
    def poly_fractonomial(cls, N: int, frac: FracParams) -> BasisDescriptor:
        return cls(BasisKind.POLY_FRACTONOMIAL, N, frac)

    @classmethod
    def legendre(cls, N: int) -> BasisDescriptor:
        return cls(BasisKind.LEGENDRE, N)

    @property
    def jacobi_params(self) -> JacobiParams:
        if self.kind is BasisKind.LEGENDRE:
            return JacobiParams(0.0, 0.0)
        return self.frac.trial_params

    @property
    def weight_exponents(self) -> tuple[float, float]:
        """Exponents of the (1-x), (1+x) prefactor shared by all basis functions."""
        if self.kind is BasisKind.LEGENDRE:
            return (0.0, 0.0)
        return (self.frac.mu, self.frac.nu)


@dataclass(frozen=True, eq=False)
class SolutionExpansion:
    """Coefficients u_0..u_N of a function in a BasisDescriptor."""

    basis: BasisDescriptor
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, ndmin=1)
        if c.size != self.basis.N + 1:
            raise ConfigurationError(
                f"expected {self.basis.N + 1} coefficients, got {c.size}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def as_series(self) -> JacobiSeries:
        return JacobiSeries(self.coeffs, self.basis.jacobi_params, self.basis.weight_exponents)

    def __call__(self, x):
        return fractonomial_eval(self, x)

    def mass(self) -> float:
        """Integral over (-1, 1); only the zeroth mode contributes."""
        from .specialfn import jacobi_weight_integral

        return float(self.coeffs[0] * jacobi_weight_integral(self.basis.jacobi_params))


def fractonomial_eval(expansion: SolutionExpansion, x):
    """Evaluate a SolutionExpansion; poly-fractonomials only at interior points."""
    x = np.asarray(x, dtype=float)
    if expansion.basis.kind is BasisKind.POLY_FRACTONOMIAL:
        mu, nu = expansion.basis.weight_exponents
        singular = (mu < 0 and np.any(x >= 1.0)) or (nu < 0 and np.any(x <= -1.0))
        if singular or np.any(np.abs(x) > 1.0):
            raise DomainError("poly-fractonomial expansions are evaluated at interior points only")
    elif np.any(np.abs(x) > 1.0):
        raise DomainError("evaluation point outside [-1, 1]")
    return expansion.as_series()(x)


def lambda_coeff(n, alpha):
    """Gamma(n+alpha-1)/Gamma(n+1), the fractional-integral eigen-coefficient."""
    n = np.asarray(n, dtype=float)
    out = gamma_ratio(n + alpha - 1.0, n + 1.0)
    return out


def flux_coeff(n, alpha, order: int):
    """Gamma(n+order+alpha-1)/(2^order Gamma(n+1)); zero where n < order."""
    n = np.asarray(n, dtype=float)
    out = np.where(n >= order, gamma_ratio(n + order + alpha - 1.0, n + 1.0) / 2.0 ** order, 0.0)
    return float(out) if out.ndim == 0 else out


def _one_hot(k: int, value: float) -> np.ndarray:
    c = np.zeros(k + 1)
    c[k] = value
    return c


def _require_fractonomial(basis: BasisDescriptor) -> FracParams:
    if basis.kind is not BasisKind.POLY_FRACTONOMIAL:
        raise ConfigurationError("operation requires a poly-fractonomial basis")
    return basis.frac


def apply_I_2ma(basis: BasisDescriptor, k: int) -> JacobiSeries:
    """Two-sided fractional integral of order 2-alpha of J_k^{-mu,-nu}.

    The image is lambda_k P_k^{nu,mu} (note the swapped indices), returned as
    a one-hot JacobiSeries.
    """
    frac = _require_fractonomial(basis)
    return JacobiSeries(_one_hot(k, float(lambda_coeff(k, frac.alpha))), frac.image_params)


def apply_D_frac(basis: BasisDescriptor, k: int, order: int) -> JacobiSeries:
    """Two-sided R-L derivative of J_k^{-mu,-nu} of order alpha-2+order.

    ``order`` 1 gives the flux D_p^{alpha-1}, 2 gives D_p^{alpha}. The image is
    Ctilde P_{k-order}^{nu+order, mu+order}, exactly zero for k < order.
    """
    if order not in (1, 2):
        raise ConfigurationError("order must be 1 or 2")
    frac = _require_fractonomial(basis)
    params = frac.image_params.shifted(float(order))
    if k < order:
        return JacobiSeries(np.zeros(1), params)
    return JacobiSeries(_one_hot(k - order, float(flux_coeff(k, frac.alpha, order))), params)


class CaputoImage(NamedTuple):
    """One-sided Caputo data for a Legendre mode.

    ``flux`` is the one-sided Caputo derivative of order alpha-1 and
    ``derivative`` its first derivative, both singular-weighted series.
    """

    derivative: JacobiSeries
    flux: JacobiSeries


def _legendre_derivative_modes(k: int) -> np.ndarray:
    # L_k' = sum_{n<k, n+k odd} (2n+1) L_n
    c = np.zeros(max(k, 1))
    for n in range(k - 1, -1, -2):
        c[n] = 2.0 * n + 1.0
    return c


def caputo_legendre_deriv(k: int, side: str, alpha: float) -> CaputoImage:
    """Left or right Caputo derivative of order alpha-1 of L_k, and its derivative.

    Left:  flux = (1+x)^{2-alpha} sum (2n+1) z_n P_n^{alpha-2, 2-alpha}
           derivative = (1+x)^{1-alpha} sum (2n+1) r_n P_n^{alpha-1, 1-alpha}
    Right: flux = -(1-x)^{2-alpha} sum (2n+1) z_n P_n^{2-alpha, alpha-2}
           derivative = (1-x)^{1-alpha} sum (2n+1) r_n P_n^{1-alpha, alpha-1}
    with r_n = Gamma(n+1)/Gamma(n+2-alpha), z_n = Gamma(n+1)/Gamma(n+3-alpha)
    and the sums over n < k with n + k odd.
    """
    if not 1.0 < alpha < 2.0:
        raise ConfigurationError(f"alpha must lie in (1, 2), got {alpha}")
    if k < 0:
        raise ConfigurationError("degree must be non-negative")
    modes = _legendre_derivative_modes(k)
    n = np.arange(modes.size, dtype=float)
    r = modes * gamma_ratio(n + 1.0, n + 2.0 - alpha)
    z = modes * gamma_ratio(n + 1.0, n + 3.0 - alpha)
    if side == "left":
        deriv = JacobiSeries(r, (alpha - 1.0, 1.0 - alpha), (0.0, 1.0 - alpha))
        flux = JacobiSeries(z, (alpha - 2.0, 2.0 - alpha), (0.0, 2.0 - alpha))
    elif side == "right":
        deriv = JacobiSeries(r, (1.0 - alpha, alpha - 1.0), (1.0 - alpha, 0.0))
        flux = JacobiSeries(-z, (2.0 - alpha, alpha - 2.0), (2.0 - alpha, 0.0))
    else:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    return CaputoImage(deriv, flux)


def fractonomial_integral_coeffs(k: int, frac: FracParams) -> np.ndarray:
    """Monomial coefficients a_{k,j}, j = 0..k, of the fractional integral on (0, 1).

    The two-sided integral of order 2-alpha over (0, 1) maps
    t^nu (1-t)^mu t^k to sum_j a_{k,j} t^j. At p = 1 the denominator gamma
    hits poles for j < k; those coefficients are the exact zeros of 1/gamma.
    """
    alpha, mu, nu = frac.alpha, frac.mu, frac.nu
    j = np.arange(k + 1, dtype=float)
    arg = alpha - 1.0 - nu - k + j
    pole = (arg <= 0.0) & (np.abs(arg - np.round(arg)) <= 1e-12)
    recip = np.zeros_like(arg)
    recip[~pole] = 1.0 / gamma(arg[~pole])
    return ((-1.0) ** k * (-1.0) ** j * gamma(j + alpha - 1.0) * gamma(mu + 1.0) * recip
            / (gamma(j + 1.0) * gamma(k + 1.0 - j)))


def basis_table(basis: BasisDescriptor, x) -> np.ndarray:
    """Rows phi_k(x), k = 0..N, of the trial basis (with its singular factor)."""
    x = np.asarray(x, dtype=float)
    table = jacobi_table(basis.N, basis.jacobi_params, x)
    mu, nu = basis.weight_exponents
    if mu or nu:
        table = table * ((1.0 - x) ** mu * (1.0 + x) ** nu)
    return table


class MonomialOp(enum.Enum):
    RL_INTEGRAL_2MA = "RL_integral_2ma"
    RL_DERIV_AM1 = "RL_deriv_am1"
    CAPUTO_DERIV_AM1 = "Caputo_deriv_am1"


def monomial_rule(op: MonomialOp, j: float, alpha: float) -> tuple[float, float]:
    """(coefficient, new exponent) of a one-sided operator applied to a power.

    The same rule serves (1+x)^j under left operators and (1-x)^j under
    right operators.
    """
    op = MonomialOp(op)
    if op is MonomialOp.RL_INTEGRAL_2MA:
        return float(gamma_ratio(j + 1.0, j + 3.0 - alpha)), j + 2.0 - alpha
    if op is MonomialOp.CAPUTO_DERIV_AM1 and j == 0:
        return 0.0, 0.0
    return float(gamma_ratio(j + 1.0, j + 2.0 - alpha)), j + 1.0 - alpha


def frac_monomial_calculus(kind, side: str, j, x, alpha: float):
    """Closed-form one-sided fractional calculus of (1+x)^j (left) or (1-x)^j (right).

    kind is a MonomialOp (or its string value). Left operators start at -1,
    right operators at +1; the right derivatives follow the usual sign
    convention (-d/dx of the right integral, minus the right integral of u'),
    which makes the rules mirror images of each other:

        I^{2-alpha} (1+x)^j = G(j+1)/G(j+3-alpha) (1+x)^{j+2-alpha}
        D^{alpha-1} (1+x)^j = G(j+1)/G(j+2-alpha) (1+x)^{j+1-alpha}

    The Caputo derivative agrees with the R-L one for j >= 1 and vanishes
    for j = 0.
    """
    if not 1.0 < alpha < 2.0:
        raise ConfigurationError(f"alpha must lie in (1, 2), got {alpha}")
    if j < 0:
        raise DomainError("power must be non-negative")
    coef, expo = monomial_rule(MonomialOp(kind), j, alpha)
    x = np.asarray(x, dtype=float)
    if side == "left":
        base = 1.0 + x
    elif side == "right":
        base = 1.0 - x
    else:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    if coef == 0.0:
        out = np.zeros(x.shape)
    else:
        with np.errstate(divide="ignore"):
            out = coef * base ** expo
    return float(out) if out.ndim == 0 else out
