"""Manufactured solutions in closed form.

A smooth exact solution u is written twice, as a power series in (1+x) for
the left operators and in (1-x) for the right operators. Every fractional
operator then acts term by term through the monomial rules, so forcing and
boundary data are exact sums of powers c (1 +/- x)^e. Inner products of such
sums against polynomial test functions are computed with Gauss-Jacobi rules
whose weight absorbs the fractional part of each exponent.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

from .errors import ConfigurationError
from .fracbasis import FracParams, MonomialOp, monomial_rule
from .specialfn import JacobiParams, gauss_jacobi

__all__ = ["SidedPowerSum", "ManufacturedSolution"]

_COS_TAYLOR_DEGREE = 48


def _clean(terms):
    return tuple((float(c), float(e)) for c, e in terms if c != 0.0)


@dataclass(frozen=True)
class SidedPowerSum:
    """sum c (1+x)^e over ``left`` plus sum c (1-x)^e over ``right``."""

    left: tuple = ()
    right: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "left", _clean(self.left))
        object.__setattr__(self, "right", _clean(self.right))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            for c, e in self.left:
                out = out + c * (1.0 + x) ** e
            for c, e in self.right:
                out = out + c * (1.0 - x) ** e
        return float(out) if out.ndim == 0 else out

    def __add__(self, other: SidedPowerSum) -> SidedPowerSum:
        return SidedPowerSum(self.left + other.left, self.right + other.right)

    def scaled(self, factor: float) -> SidedPowerSum:
        return SidedPowerSum(tuple((factor * c, e) for c, e in self.left),
                             tuple((factor * c, e) for c, e in self.right))

    def derivative(self) -> SidedPowerSum:
        return SidedPowerSum(tuple((c * e, e - 1.0) for c, e in self.left if e != 0.0),
                             tuple((-c * e, e - 1.0) for c, e in self.right if e != 0.0))

    def endpoint(self, side: int) -> float:
        """Value at x = +1 or -1; powers that vanish there are dropped exactly."""
        total = 0.0
        for c, e in self.left:
            if side == 1:
                total += c * 2.0 ** e
            elif e == 0.0:
                total += c
            elif e < 0.0:
                raise ConfigurationError("power sum is singular at x = -1")
        for c, e in self.right:
            if side == -1:
                total += c * 2.0 ** e
            elif e == 0.0:
                total += c
            elif e < 0.0:
                raise ConfigurationError("power sum is singular at x = +1")
        return total

    def inner_products(self, test_table: Callable, test_degree: int, weight=(0.0, 0.0)):
        """Integrals of self * t_i * (1-x)^wa (1+x)^wb for the polynomials t_i.

        ``test_table(x)`` returns the test functions at x as an array of
        shape (n_tests, len(x)); they are polynomials of degree <= test_degree.
        Each power (1+x)^e is split as (1+x)^m (1+x)^r with m a non-negative
        integer, and r is moved into a Gauss-Jacobi weight. Terms that share r
        share one rule, so the result is exact up to rounding.
        """
        wa, wb = (weight.a, weight.b) if isinstance(weight, JacobiParams) else weight
        groups = defaultdict(list)
        for c, e in self.left:
            total = e + wb
            m = max(0, math.floor(total))
            groups[("left", round(total - m, 13))].append((c, m))
        for c, e in self.right:
            total = e + wa
            m = max(0, math.floor(total))
            groups[("right", round(total - m, 13))].append((c, m))
        result = None
        for (side, r), terms in groups.items():
            if r <= -1.0:
                raise ConfigurationError("forcing is not integrable against the weight")
            mmax = max(m for _, m in terms)
            params = (wa, r) if side == "left" else (r, wb)
            size = (mmax + test_degree + 1) // 2 + 2
            rule = gauss_jacobi(size, params)
            x = rule.nodes
            base = 1.0 + x if side == "left" else 1.0 - x
            vals = np.zeros_like(x)
            for c, m in terms:
                vals += c * base ** m
            part = test_table(x) @ (vals * rule.weights)
            result = part if result is None else result + part
        if result is None:
            result = np.zeros(np.shape(test_table(np.zeros(1)))[0])
        return result


@dataclass(frozen=True, eq=False)
class ManufacturedSolution:
    """Exact solution u with its power series in (1+x) and in (1-x).

    ``left_coeffs[j]`` multiplies (1+x)^j, ``right_coeffs[j]`` multiplies (1-x)^j.
    """

    name: str
    exact: Callable
    left_coeffs: np.ndarray
    right_coeffs: np.ndarray

    @classmethod
    def from_polynomial(cls, name: str, coeffs) -> ManufacturedSolution:
        """u given by power-basis coefficients in x (lowest degree first)."""
        coeffs = np.asarray(coeffs, dtype=float)
        poly = Polynomial(coeffs)
        # (1+x) = t  =>  x = t - 1 ; (1-x) = s  =>  x = 1 - s
        left = poly(Polynomial([-1.0, 1.0])).coef
        right = poly(Polynomial([1.0, -1.0])).coef
        return cls(name, lambda x: poly(np.asarray(x, dtype=float)), left, right)

    @classmethod
    def cos_pi(cls, degree: int = _COS_TAYLOR_DEGREE) -> ManufacturedSolution:
        """u = cos(pi x) = -cos(pi (1+x)) = -cos(pi (1-x)), truncated Taylor series."""
        c = np.zeros(degree + 1)
        for k in range(0, degree + 1, 2):
            c[k] = -((-1.0) ** (k // 2)) * math.pi ** k / math.factorial(k)
        return cls("cospi", lambda x: np.cos(np.pi * np.asarray(x, dtype=float)), c, c.copy())

    def _apply(self, op: MonomialOp, alpha: float, weights: tuple[float, float]) -> SidedPowerSum:
        wl, wr = weights
        left, right = [], []
        for j, a in enumerate(self.left_coeffs):
            coef, expo = monomial_rule(op, j, alpha)
            left.append((wl * a * coef, expo))
        for j, b in enumerate(self.right_coeffs):
            coef, expo = monomial_rule(op, j, alpha)
            right.append((wr * b * coef, expo))
        return SidedPowerSum(tuple(left), tuple(right))

    def as_power_sum(self) -> SidedPowerSum:
        return SidedPowerSum(tuple((a, float(j)) for j, a in enumerate(self.left_coeffs)))

    def rl_potential(self, frac: FracParams) -> SidedPowerSum:
        """Two-sided fractional integral of order 2-alpha."""
        c = frac.c_alpha_p
        return self._apply(MonomialOp.RL_INTEGRAL_2MA, frac.alpha, (c * frac.p, c * (1.0 - frac.p)))

    def rl_flux(self, frac: FracParams) -> SidedPowerSum:
        """Two-sided R-L derivative of order alpha-1 (derivative of the potential)."""
        c = frac.c_alpha_p
        return self._apply(MonomialOp.RL_DERIV_AM1, frac.alpha, (c * frac.p, -c * (1.0 - frac.p)))

    def caputo_flux(self, frac: FracParams) -> SidedPowerSum:
        """Two-sided Caputo derivative of order alpha-1."""
        c = frac.c_alpha_p
        return self._apply(MonomialOp.CAPUTO_DERIV_AM1, frac.alpha, (c * frac.p, -c * (1.0 - frac.p)))

    def flux(self, frac: FracParams, caputo: bool) -> SidedPowerSum:
        return self.caputo_flux(frac) if caputo else self.rl_flux(frac)

    def forcing(self, frac: FracParams, c: float, caputo: bool) -> SidedPowerSum:
        """f = -d/dx flux + c u."""
        f = self.flux(frac, caputo).derivative().scaled(-1.0)
        if c:
            f = f + self.as_power_sum().scaled(c)
        return f
