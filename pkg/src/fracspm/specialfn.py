"""Gamma function, Jacobi polynomials and Gauss-Jacobi quadrature.

Everything here is double precision and vectorized over the evaluation
point(s). Jacobi polynomials use the standard normalization

    P_n^{a,b}(1) = Gamma(n+a+1) / (Gamma(n+1) Gamma(a+1))

and are orthogonal on (-1, 1) under the weight (1-x)^a (1+x)^b.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConfigurationError, ConvergenceError, DomainError, PoleError

__all__ = [
    "gamma",
    "loggamma",
    "gamma_sign",
    "gamma_ratio",
    "JacobiParams",
    "jacobi_eval",
    "jacobi_table",
    "jacobi_endpoint",
    "jacobi_endpoints",
    "jacobi_deriv_coeff",
    "jacobi_norm",
    "jacobi_weight_integral",
    "JacobiSeries",
    "QuadratureRule",
    "gauss_jacobi",
]

# Lanczos approximation with g = 607/128 and 15 coefficients (Godfrey).
_LANCZOS_SHIFT = 5.2421875  # g + 1/2
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEF = np.array([
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
])
_SQRT_2PI = 2.5066282746310005024

# Gamma ratios with both arguments above this use an asymptotic form
_RATIO_ASYMPTOTIC_MIN = 30.0
# otherwise, above this argument size they are formed in log space
_RATIO_LOG_THRESHOLD = 150.0


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _sinpi(x):
    """sin(pi x) with exact argument reduction."""
    r = x - 2.0 * np.round(0.5 * x)  # r in [-1, 1], exact
    return np.sin(np.pi * r)


def _check_poles(x):
    bad = (x <= 0) & (x == np.floor(x))
    if np.any(bad):
        raise PoleError(f"Gamma has a pole at {x[bad].ravel()[0]:g}")


def _lanczos_series(x):
    """c0 + sum_j c_j/(x+j), for x >= 0.5."""
    j = np.arange(1, _LANCZOS_COEF.size + 1)
    return _LANCZOS_C0 + np.sum(_LANCZOS_COEF / (x[..., None] + j), axis=-1)


def _gamma_pos(x):
    t = x + _LANCZOS_SHIFT
    half = 0.5 * (x + 0.5)
    # split the power to stay finite up to x ~ 171
    p = t ** half
    return _SQRT_2PI * _lanczos_series(x) / x * (p * np.exp(-t)) * p


def _loggamma_pos(x):
    t = x + _LANCZOS_SHIFT
    return (x + 0.5) * np.log(t) - t + np.log(_SQRT_2PI * _lanczos_series(x) / x)


def gamma(x):
    """Gamma function for real arguments (not a non-positive integer)."""
    x, scalar = _as_float_array(x)
    _check_poles(x)
    out = np.empty_like(x)
    pos = x >= 0.5
    out[pos] = _gamma_pos(x[pos])
    neg = ~pos
    if np.any(neg):
        xn = x[neg]
        out[neg] = np.pi / (_sinpi(xn) * _gamma_pos(1.0 - xn))
    return float(out) if scalar else out


def loggamma(x):
    """log|Gamma(x)|; finite for large arguments where Gamma overflows."""
    x, scalar = _as_float_array(x)
    _check_poles(x)
    out = np.empty_like(x)
    pos = x >= 0.5
    out[pos] = _loggamma_pos(x[pos])
    neg = ~pos
    if np.any(neg):
        xn = x[neg]
        out[neg] = np.log(np.pi / np.abs(_sinpi(xn))) - _loggamma_pos(1.0 - xn)
    return float(out) if scalar else out


def gamma_sign(x):
    """Sign of Gamma(x): +1 for x > 0, (-1)^ceil(-x) on the negative axis."""
    x, scalar = _as_float_array(x)
    _check_poles(x)
    out = np.where(x > 0, 1.0, np.where(np.floor(x) % 2 == 0, 1.0, -1.0))
    return float(out) if scalar else out


def _stirling_tail(z):
    z2 = z * z
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * z2)) / z2) / z2) / z2) / z


def _log_gamma_ratio_asymptotic(num, den):
    # log Gamma(den+d) - log Gamma(den) with every term O(d), no large cancellation
    d = num - den
    x = den
    return (d * np.log(x) + (x + d - 0.5) * np.log1p(d / x) - d
            + _stirling_tail(num) - _stirling_tail(den))


def gamma_ratio(num, den):
    """Gamma(num)/Gamma(den).

    Large arguments that differ by a modest shift (the usual Gamma(n+a)/Gamma(n+b)
    pattern) use a cancellation-free asymptotic expansion; other large
    arguments go through log-Gamma.
    """
    num, s1 = _as_float_array(num)
    den, s2 = _as_float_array(den)
    num, den = np.broadcast_arrays(num, den)
    out = np.empty(num.shape)
    asym = (np.minimum(num, den) >= _RATIO_ASYMPTOTIC_MIN) & (np.abs(num - den) <= 12.0)
    big = ~asym & ((np.abs(num) > _RATIO_LOG_THRESHOLD) | (np.abs(den) > _RATIO_LOG_THRESHOLD))
    small = ~(asym | big)
    if np.any(asym):
        out[asym] = np.exp(_log_gamma_ratio_asymptotic(num[asym], den[asym]))
    if np.any(big):
        nb, db = num[big], den[big]
        out[big] = gamma_sign(nb) * gamma_sign(db) * np.exp(loggamma(nb) - loggamma(db))
    if np.any(small):
        out[small] = gamma(num[small]) / gamma(den[small])
    return float(out) if (s1 and s2) else out


@dataclass(frozen=True)
class JacobiParams:
    """Jacobi indices (a, b) of P_n^{a,b}; weight (1-x)^a (1+x)^b."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > -1 and self.b > -1):
            raise ConfigurationError(
                f"Jacobi indices must exceed -1, got a={self.a}, b={self.b}")

    def swapped(self) -> JacobiParams:
        return JacobiParams(self.b, self.a)

    def shifted(self, da: float, db: float | None = None) -> JacobiParams:
        return JacobiParams(self.a + da, self.b + (da if db is None else db))

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        return (1.0 - x) ** self.a * (1.0 + x) ** self.b


def _params(params) -> JacobiParams:
    if isinstance(params, JacobiParams):
        return params
    a, b = params
    return JacobiParams(float(a), float(b))


def jacobi_table(nmax: int, params, x) -> np.ndarray:
    """All P_0..P_nmax at x by the three-term recurrence.

    Returns an array of shape (nmax+1,) + shape(x).
    """
    if nmax < 0:
        raise ConfigurationError("degree must be non-negative")
    p = _params(params)
    a, b = p.a, p.b
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax == 0:
        return out
    out[1] = 0.5 * ((a + b + 2.0) * x + (a - b))
    ab = a + b
    a2b2 = a * a - b * b
    for n in range(2, nmax + 1):
        s = 2.0 * n + ab
        c1 = 2.0 * n * (n + ab) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * x + a2b2)
        c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s
        out[n] = (c2 * out[n - 1] - c3 * out[n - 2]) / c1
    return out


def jacobi_eval(n: int, params, x):
    """P_n^{a,b}(x)."""
    if n < 0:
        raise ConfigurationError("degree must be non-negative")
    val = jacobi_table(n, params, x)[n]
    return float(val) if val.ndim == 0 else val


def jacobi_endpoint(n: int, params, side: int) -> float:
    """P_n^{a,b}(+1) or P_n^{a,b}(-1) in closed form."""
    if n < 0:
        raise ConfigurationError("degree must be non-negative")
    p = _params(params)
    if side == 1:
        return _binom_like(n, p.a)
    if side == -1:
        return (-1.0) ** n * _binom_like(n, p.b)
    raise DomainError(f"side must be +1 or -1, got {side!r}")


def jacobi_endpoints(nmax: int, params, side: int) -> np.ndarray:
    """P_n^{a,b}(side) for n = 0..nmax (empty for nmax < 0)."""
    p = _params(params)
    if side not in (1, -1):
        raise DomainError(f"side must be +1 or -1, got {side!r}")
    if nmax < 0:
        return np.zeros(0)
    a = p.a if side == 1 else p.b
    j = np.arange(1, min(nmax, 64) + 1)
    vals = np.concatenate(([1.0], np.cumprod((a + j) / j)))
    if nmax > 64:
        vals = np.concatenate((vals, [_binom_like(n, a) for n in range(65, nmax + 1)]))
    if side == -1:
        vals = vals * (-1.0) ** np.arange(nmax + 1)
    return vals


def _binom_like(n: int, a: float) -> float:
    # Gamma(n+a+1) / (Gamma(n+1) Gamma(a+1)) == prod_{j=1}^{n} (a+j)/j
    if n <= 64:
        return float(np.prod((a + np.arange(1, n + 1)) / np.arange(1, n + 1)))
    return float(gamma_ratio(n + a + 1.0, n + 1.0) / gamma(a + 1.0))


def jacobi_deriv_coeff(n: int, k: int, params) -> float:
    """d_{n,k} with D^k P_n^{a,b} = d_{n,k} P_{n-k}^{a+k,b+k}; zero for k > n."""
    if k < 0:
        raise ConfigurationError("derivative order must be non-negative")
    if k > n:
        return 0.0
    p = _params(params)
    s = n + p.a + p.b + 1.0
    return float(gamma_ratio(s + k, s)) / 2.0 ** k


def jacobi_norm(n, params):
    """gamma_n^{a,b} = integral of w^{a,b} (P_n^{a,b})^2 over (-1, 1)."""
    p = _params(params)
    ns = np.atleast_1d(np.asarray(n))
    out = np.array([_jacobi_norm_scalar(int(m), p.a, p.b) for m in ns.ravel()])
    if np.ndim(n) == 0:
        return float(out[0])
    return out.reshape(np.shape(n))


def _jacobi_norm_scalar(n: int, a: float, b: float) -> float:
    if n < 0:
        raise ConfigurationError("degree must be non-negative")
    if n == 0:
        return jacobi_weight_integral((a, b))
    ab = a + b
    return (2.0 ** (ab + 1.0) / (2.0 * n + ab + 1.0)
            * gamma_ratio(n + a + 1.0, n + 1.0) * gamma_ratio(n + b + 1.0, n + ab + 1.0))


def jacobi_weight_integral(params) -> float:
    """Integral of (1-x)^a (1+x)^b over (-1, 1)."""
    p = _params(params)
    return 2.0 ** (p.a + p.b + 1.0) * gamma(p.a + 1.0) * gamma(p.b + 1.0) / gamma(p.a + p.b + 2.0)


@dataclass(frozen=True, eq=False)
class JacobiSeries:
    """(1-x)^wa (1+x)^wb * sum_n coeffs[n] P_n^{a,b}(x).

    ``weight`` holds the exponents (wa, wb) of the singular prefactor; with
    the default (0, 0) the series is an ordinary polynomial.
    """

    coeffs: np.ndarray
    params: JacobiParams
    weight: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, ndmin=1)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "params", _params(self.params))
        object.__setattr__(self, "weight", (float(self.weight[0]), float(self.weight[1])))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_polynomial(self) -> bool:
        return self.weight == (0.0, 0.0)

    def polynomial_part(self, x):
        x = np.asarray(x, dtype=float)
        if not np.any(self.coeffs):
            return np.zeros(x.shape)
        table = jacobi_table(self.degree, self.params, x)
        return np.tensordot(self.coeffs, table, axes=1)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        val = self.polynomial_part(x)
        wa, wb = self.weight
        if wa:
            val = val * (1.0 - x) ** wa
        if wb:
            val = val * (1.0 + x) ** wb
        return float(val) if val.ndim == 0 else val

    def scaled(self, factor: float) -> JacobiSeries:
        return JacobiSeries(factor * self.coeffs, self.params, self.weight)

    def derivative(self) -> JacobiSeries:
        """Exact derivative; the result lives in the (a+1, b+1) family."""
        if not self.is_polynomial:
            raise ConfigurationError("derivative() is only defined for polynomial series")
        n = np.arange(1, self.degree + 1)
        if n.size == 0:
            return JacobiSeries(np.zeros(1), self.params.shifted(1.0))
        c = self.coeffs[1:] * 0.5 * (n + self.params.a + self.params.b + 1.0)
        return JacobiSeries(c, self.params.shifted(1.0))

    def endpoint(self, side: int) -> float:
        if not self.is_polynomial:
            raise DomainError("endpoint value of a singular-weighted series")
        vals = jacobi_endpoints(self.degree, self.params, side)
        return float(self.coeffs @ vals)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Jacobi rule: sum w_j g(x_j) ~ integral of (1-x)^a (1+x)^b g(x)."""

    nodes: np.ndarray
    weights: np.ndarray
    params: JacobiParams

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, values):
        """Contract the last axis of ``values`` (sampled at the nodes)."""
        return np.asarray(values) @ self.weights


def _jacobi_and_derivative(n, a, b, x):
    """P_n^{a,b}(x) and its derivative in extended precision (np.longdouble).

    The offsets 1 -/+ x of the outermost nodes are O(n^-2), so a double
    precision recurrence loses about n^2 ulps in them; the extra bits of
    longdouble (where the platform has them) keep the weights accurate.
    """
    ld = np.longdouble
    x = np.asarray(x, dtype=ld)
    a, b = ld(a), ld(b)
    prev = np.ones_like(x)
    if n == 0:
        return prev, np.zeros_like(x)
    cur = ((a + b + 2) * x + (a - b)) / 2
    for k in range(1, n):
        s = 2 * k + a + b
        c1 = 2 * (k + 1) * (k + a + b + 1) * s
        c2 = (s + 1) * ((s + 2) * s * x + a * a - b * b)
        c3 = 2 * (k + a) * (k + b) * (s + 2)
        prev, cur = cur, (c2 * cur - c3 * prev) / c1
    s = 2 * n + a + b
    dcur = (n * ((a - b) - s * x) * cur + 2 * (n + a) * (n + b) * prev) / (s * (1 - x) * (1 + x))
    return cur, dcur


@lru_cache(maxsize=512)
def _gauss_jacobi_cached(n: int, a: float, b: float) -> QuadratureRule:
    p = JacobiParams(a, b)
    if n == 1:
        x = np.array([(b - a) / (a + b + 2.0)])
    else:
        k = np.arange(n, dtype=float)
        s = 2.0 * k + a + b
        diag = np.empty(n)
        diag[0] = (b - a) / (a + b + 2.0)
        diag[1:] = (b * b - a * a) / (s[1:] * (s[1:] + 2.0))
        k1 = k[1:]
        s1 = s[1:]
        off2 = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) / (s1 ** 2 * (s1 + 1.0) * (s1 - 1.0))
        off2[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
        x = eigh_tridiagonal(diag, np.sqrt(off2), eigvals_only=True)
    x = np.sort(np.clip(x, -1.0 + 1e-300, 1.0 - 1e-300)).astype(np.longdouble)
    # Newton polish on the recurrence
    tol = max(64.0 * float(np.finfo(np.longdouble).eps), 1e-17)
    done = np.zeros(n, dtype=bool)
    for _ in range(100):
        pn, dpn = _jacobi_and_derivative(n, a, b, x)
        step = np.where(done, 0.0, pn / dpn)
        x = x - step
        done |= np.abs(step) <= tol * np.maximum(1.0, np.abs(x))
        if done.all():
            break
    else:
        raise ConvergenceError(
            f"Gauss-Jacobi Newton iteration did not converge for n={n}, a={a}, b={b}; "
            f"{int((~done).sum())} nodes left, last max step {float(np.max(np.abs(step))):.3e}")
    _, dpn = _jacobi_and_derivative(n, a, b, x)
    c = (2.0 ** (a + b + 1.0) * gamma_ratio(n + a + 1.0, n + 1.0)
         * gamma_ratio(n + b + 1.0, n + a + b + 1.0))
    w = (c / ((1 - x) * (1 + x) * dpn ** 2)).astype(float)
    x = x.astype(float)
    if np.any(np.diff(x) <= 0) or x[0] <= -1 or x[-1] >= 1:
        raise ConvergenceError(f"Gauss-Jacobi nodes not strictly inside (-1,1) for n={n}")
    x.flags.writeable = False
    w.flags.writeable = False
    return QuadratureRule(x, w, p)


def gauss_jacobi(n: int, params) -> QuadratureRule:
    """n-point Gauss-Jacobi rule, exact for polynomials of degree <= 2n-1.

    Nodes are seeded from the eigenvalues of the symmetric Jacobi matrix and
    polished by Newton's method on the three-term recurrence; weights use
    the closed-form Christoffel numbers.
    """
    if n < 1:
        raise ConfigurationError("rule size must be at least 1")
    p = _params(params)
    return _gauss_jacobi_cached(int(n), float(p.a), float(p.b))
