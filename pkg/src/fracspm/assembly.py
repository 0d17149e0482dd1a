"""Assembly of the spectral penalty (SPM) and spectral tau (PGS-tau) systems.

The problem is

    -d/dx F(u) + c u = f  on (-1, 1),   B_-(u)(-1) = g1,  B_+(u)(1) = g2,

where the flux F is the two-sided R-L derivative of order alpha-1 (trial
space of poly-fractonomials, test functions I_p^{2-alpha} J_i) or the
two-sided Caputo derivative (Legendre trial and test functions).

Rows are test indices i, columns trial indices k, both 0..N.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError
from .fracbasis import (
    BasisDescriptor,
    FracParams,
    caputo_legendre_deriv,
    flux_coeff,
    lambda_coeff,
    solve_mu_nu,
)
from .linalg import LUFactorization, lu_factor
from .manufactured import SidedPowerSum
from .penalty import (
    PenaltyConfig,
    penalty_caputo_dbc,
    penalty_caputo_fnbc,
    penalty_rl_fdbc,
    penalty_rl_fnbc,
)
from .specialfn import JacobiParams, JacobiSeries, gauss_jacobi, jacobi_endpoints, jacobi_table

__all__ = [
    "DerivKind",
    "BCKind",
    "Method",
    "ProblemSpec",
    "LinearSystem",
    "default_penalty",
    "assemble_spm_rl",
    "assemble_spm_caputo",
    "assemble_pgs_tau",
    "assemble",
    "rl_operator_matrices",
    "caputo_operator_matrices",
    "operator_matrices",
    "penalty_matrix",
    "weighting_table",
    "boundary_operator_values",
    "DEFAULT_RHS_EXTRA_NODES",
]

DEFAULT_RHS_EXTRA_NODES = 16


class DerivKind(enum.Enum):
    RIEMANN_LIOUVILLE = "rl"
    CAPUTO = "caputo"


class BCKind(enum.Enum):
    FDBC = "fdbc"
    RL_FNBC = "rl-fnbc"
    CLASSICAL_DIRICHLET = "dirichlet"
    CAPUTO_FNBC = "caputo-fnbc"

    @property
    def deriv_kind(self) -> DerivKind:
        if self in (BCKind.FDBC, BCKind.RL_FNBC):
            return DerivKind.RIEMANN_LIOUVILLE
        return DerivKind.CAPUTO


class Method(enum.Enum):
    SPM = "SPM"
    PGS_TAU = "PGS-tau"


def _zero(x):
    return np.zeros(np.shape(x))


@dataclass(frozen=True)
class ProblemSpec:
    """One fractional boundary-value problem.

    ``rhs`` is f; a SidedPowerSum is integrated exactly, any other callable
    with a Gauss rule of size 2N+16. ``weight`` defaults to (alpha/2, alpha/2)
    for FDBC and to the identity weight otherwise. A non-identity weight with
    an FNBC family is applied literally to the penalty pairing; coercivity is
    only established for the identity weight there.
    """

    alpha: float
    p: float
    c: float
    bc_kind: BCKind
    g1: float = 0.0
    g2: float = 0.0
    rhs: Callable = _zero
    weight: JacobiParams | None = None
    deriv_kind: DerivKind | None = None
    rhs_name: str = "custom"
    exact: Callable | None = None
    frac: FracParams = field(init=False, repr=False, compare=False)
    default_weight: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bc = BCKind(self.bc_kind)
        object.__setattr__(self, "bc_kind", bc)
        deriv = bc.deriv_kind if self.deriv_kind is None else DerivKind(self.deriv_kind)
        if deriv is not bc.deriv_kind:
            raise ConfigurationError(
                f"boundary condition {bc.value!r} is incompatible with derivative kind {deriv.value!r}")
        object.__setattr__(self, "deriv_kind", deriv)
        if not 1.0 < self.alpha < 2.0:
            raise ConfigurationError(f"alpha must lie in (1, 2), got {self.alpha}")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigurationError(f"p must lie in [0, 1], got {self.p}")
        if not self.c >= 0.0:
            raise ConfigurationError(f"c must be non-negative, got {self.c}")
        if bc is BCKind.RL_FNBC and self.c == 0.0:
            raise ConfigurationError("R-L fractional Neumann problem with c = 0 is not uniquely solvable")
        w = self.weight
        object.__setattr__(self, "default_weight", w is None)
        if w is None:
            w = JacobiParams(self.alpha / 2.0, self.alpha / 2.0) if bc is BCKind.FDBC else JacobiParams(0.0, 0.0)
        elif not isinstance(w, JacobiParams):
            w = JacobiParams(*w)
        if deriv is DerivKind.CAPUTO and (w.a, w.b) != (0.0, 0.0):
            raise ConfigurationError("Caputo problems use the identity weight")
        object.__setattr__(self, "weight", w)
        frac = solve_mu_nu(self.alpha, self.p)
        object.__setattr__(self, "frac", frac)
        if deriv is DerivKind.RIEMANN_LIOUVILLE and (frac.mu + w.a <= -1.0 or frac.nu + w.b <= -1.0):
            raise ConfigurationError("combined mass-matrix weight exponents must exceed -1")

    def reparametrized(self, alpha: float, p: float) -> ProblemSpec:
        """Same boundary family, c and weight policy at a new (alpha, p), zero forcing."""
        return ProblemSpec(alpha, p, self.c, self.bc_kind,
                           weight=None if self.default_weight else self.weight, rhs_name="zero")

    def basis(self, N: int) -> BasisDescriptor:
        if self.deriv_kind is DerivKind.RIEMANN_LIOUVILLE:
            return BasisDescriptor.poly_fractonomial(N, self.frac)
        return BasisDescriptor.legendre(N)

    def summary(self) -> dict:
        """Flat description used for report headers."""
        return {
            "alpha": self.alpha,
            "p": self.p,
            "c": self.c,
            "deriv": self.deriv_kind.value,
            "bc": self.bc_kind.value,
            "g1": self.g1,
            "g2": self.g2,
            "rhs": self.rhs_name,
            "weight_a": self.weight.a,
            "weight_b": self.weight.b,
            "mu": self.frac.mu,
            "nu": self.frac.nu,
        }


@dataclass(eq=False)
class LinearSystem:
    """Dense system A U = F with a lazily computed, cached LU factorization."""

    matrix: np.ndarray
    rhs: np.ndarray
    method: Method
    basis: BasisDescriptor
    _lu: LUFactorization | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        n = self.matrix.shape
        if len(n) != 2 or n[0] != n[1] or self.rhs.shape != (n[0],):
            raise ConfigurationError("inconsistent linear system dimensions")

    @property
    def factorization(self) -> LUFactorization:
        if self._lu is None:
            self._lu = lu_factor(self.matrix)
        return self._lu

    def solve(self, rhs=None) -> np.ndarray:
        return self.factorization.solve(self.rhs if rhs is None else rhs)


def default_penalty(spec: ProblemSpec, N: int) -> PenaltyConfig:
    bc = spec.bc_kind
    if bc is BCKind.FDBC:
        return penalty_rl_fdbc(N, spec.alpha, spec.weight)
    if bc is BCKind.RL_FNBC:
        return penalty_rl_fnbc(N, spec.frac)
    if bc is BCKind.CAPUTO_FNBC:
        return penalty_caputo_fnbc(N)
    return penalty_caputo_dbc(N)


# -- quadrature helpers ------------------------------------------------------


def _rule_for(degree: int, params) -> tuple[np.ndarray, np.ndarray]:
    rule = gauss_jacobi(degree // 2 + 2, params)
    return rule.nodes, rule.weights


def _series_inner(series: JacobiSeries, test_table: Callable, test_degree: int,
                  weight: JacobiParams) -> np.ndarray:
    """(series, t_i)_w for polynomial tests t_i; the series' singular factor joins the rule weight."""
    wa, wb = series.weight
    x, w = _rule_for(series.degree + test_degree, (wa + weight.a, wb + weight.b))
    return test_table(x) @ (series.polynomial_part(x) * w)


def _rhs_vector(spec: ProblemSpec, test_table: Callable, test_degree: int,
                extra_nodes: int = DEFAULT_RHS_EXTRA_NODES) -> np.ndarray:
    if isinstance(spec.rhs, SidedPowerSum):
        return spec.rhs.inner_products(test_table, test_degree, spec.weight)
    rule = gauss_jacobi(2 * test_degree + extra_nodes, spec.weight)
    fx = np.asarray(spec.rhs(rule.nodes), dtype=float) * np.ones_like(rule.nodes)
    return test_table(rule.nodes) @ (fx * rule.weights)


# -- operator blocks ---------------------------------------------------------


def _rl_test_table(frac: FracParams, N: int) -> Callable:
    lam = lambda_coeff(np.arange(N + 1), frac.alpha)

    def table(x):
        return lam[:, None] * jacobi_table(N, frac.image_params, x)

    return table


def rl_operator_matrices(frac: FracParams, weight: JacobiParams, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Stiffness S and mass M of the R-L scheme."""
    w = weight
    k = np.arange(N + 1)
    test = _rl_test_table(frac, N)
    # s_ik = C2_k (P_{k-2}^{nu+2,mu+2}, phi_i)_w ; polynomial degree <= 2N-2
    x, wt = _rule_for(2 * N, w)
    c2 = flux_coeff(k, frac.alpha, 2)
    d2 = np.zeros((N + 1, x.size))
    if N >= 2:
        d2[2:] = jacobi_table(N - 2, frac.image_params.shifted(2.0), x)
    S = (test(x) * wt) @ (d2 * c2[:, None]).T
    # m_ik = (J_k, phi_i)_w with the singular factor in the rule weight
    x, wt = _rule_for(2 * N, (frac.mu + w.a, frac.nu + w.b))
    M = (test(x) * wt) @ jacobi_table(N, frac.trial_params, x).T
    return S, M


def _legendre_table(N: int) -> Callable:
    def table(x):
        return jacobi_table(N, (0.0, 0.0), x)

    return table


def caputo_operator_matrices(frac: FracParams, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Stiffness S (from D of the Caputo flux) and Legendre mass M."""
    alpha = frac.alpha
    left = np.zeros((max(N, 1), N + 1))
    right = np.zeros((max(N, 1), N + 1))
    for k in range(1, N + 1):
        img_l = caputo_legendre_deriv(k, "left", alpha).derivative
        img_r = caputo_legendre_deriv(k, "right", alpha).derivative
        left[: img_l.coeffs.size, k] = img_l.coeffs
        right[: img_r.coeffs.size, k] = img_r.coeffs
    nmax = max(N - 1, 0)
    x, wt = _rule_for(2 * N, (0.0, 1.0 - alpha))
    gl = (jacobi_table(N, (0.0, 0.0), x) * wt) @ jacobi_table(nmax, (alpha - 1.0, 1.0 - alpha), x).T
    x, wt = _rule_for(2 * N, (1.0 - alpha, 0.0))
    gr = (jacobi_table(N, (0.0, 0.0), x) * wt) @ jacobi_table(nmax, (1.0 - alpha, alpha - 1.0), x).T
    S = frac.c_alpha_p * (frac.p * gl @ left[: nmax + 1] - (1.0 - frac.p) * gr @ right[: nmax + 1])
    M = np.diag(2.0 / (2.0 * np.arange(N + 1) + 1.0))
    return S, M


def _caputo_flux_endpoint(k: int, alpha: float, frac: FracParams, side: int,
                          ends: np.ndarray | None = None) -> float:
    """Two-sided Caputo flux of L_k at x = side (the vanishing one-sided part is an exact zero).

    ends optionally holds precomputed endpoint values of the flux image family.
    """
    if k == 0:
        return 0.0
    if side == 1:
        img = caputo_legendre_deriv(k, "left", alpha).flux
        weight = frac.c_alpha_p * frac.p
    else:
        img = caputo_legendre_deriv(k, "right", alpha).flux
        weight = -frac.c_alpha_p * (1.0 - frac.p)
    if weight == 0.0:
        return 0.0
    m = img.coeffs.size
    vals = ends[:m] if ends is not None and ends.size >= m else jacobi_endpoints(m - 1, img.params, side)
    return weight * 2.0 ** (2.0 - alpha) * float(img.coeffs @ vals)


def boundary_operator_values(bc: BCKind, frac: FracParams, N: int, side: int) -> np.ndarray:
    """(B_side phi_k)(side) for every trial function k = 0..N."""
    k = np.arange(N + 1)
    if bc is BCKind.FDBC:
        vals = jacobi_endpoints(N, frac.image_params, side)
        return lambda_coeff(k, frac.alpha) * vals
    if bc is BCKind.RL_FNBC:
        params = frac.image_params.shifted(1.0)
        vals = np.concatenate(([0.0], jacobi_endpoints(N - 1, params, side)))
        return flux_coeff(k, frac.alpha, 1) * vals
    if bc is BCKind.CLASSICAL_DIRICHLET:
        return float(side) ** k
    a = frac.alpha
    img_params = (a - 2.0, 2.0 - a) if side == 1 else (2.0 - a, a - 2.0)
    ends = jacobi_endpoints(N, img_params, side)
    return np.array([_caputo_flux_endpoint(int(j), a, frac, side, ends) for j in k])


def weighting_table(deriv: DerivKind, frac: FracParams, N: int) -> Callable:
    """Callable x -> array (N+1, len(x)) of the test functions."""
    if deriv is DerivKind.RIEMANN_LIOUVILLE:
        return _rl_test_table(frac, N)
    return _legendre_table(N)


def operator_matrices(deriv: DerivKind, frac: FracParams, weight: JacobiParams,
                      N: int) -> tuple[np.ndarray, np.ndarray]:
    """(S, M) for either derivative kind."""
    if deriv is DerivKind.RIEMANN_LIOUVILLE:
        return rl_operator_matrices(frac, weight, N)
    return caputo_operator_matrices(frac, N)


def penalty_matrix(bc: BCKind, frac: FracParams, weight: JacobiParams, N: int,
                   penalty: PenaltyConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Boundary matrix B and the vectors (rho_- Q^-, t_i), (rho_+ Q^+, t_i)."""
    test = weighting_table(bc.deriv_kind, frac, N)
    qm = _series_inner(penalty.product(-1), test, N, weight)
    qp = _series_inner(penalty.product(1), test, N, weight)
    B = (np.outer(qm, boundary_operator_values(bc, frac, N, -1))
         + np.outer(qp, boundary_operator_values(bc, frac, N, 1)))
    return B, qm, qp


def _check(spec: ProblemSpec, N: int, kind: DerivKind | None = None):
    if N < 2:
        raise ConfigurationError(f"N must be at least 2, got {N}")
    if kind is not None and spec.deriv_kind is not kind:
        raise ConfigurationError(f"expected a {kind.value} problem, got {spec.deriv_kind.value}")


def _assemble_spm(spec: ProblemSpec, N: int, penalty: PenaltyConfig | None) -> LinearSystem:
    if penalty is None:
        penalty = default_penalty(spec, N)
    S, M = operator_matrices(spec.deriv_kind, spec.frac, spec.weight, N)
    B, qm, qp = penalty_matrix(spec.bc_kind, spec.frac, spec.weight, N, penalty)
    A = -S + spec.c * M + B
    F = (_rhs_vector(spec, weighting_table(spec.deriv_kind, spec.frac, N), N)
         + spec.g1 * qm + spec.g2 * qp)
    return LinearSystem(A, F, Method.SPM, spec.basis(N))


def assemble_spm_rl(spec: ProblemSpec, N: int, penalty: PenaltyConfig | None = None) -> LinearSystem:
    """(-S + cM + B) U = F_hat + F_tilde for the R-L problem."""
    _check(spec, N, DerivKind.RIEMANN_LIOUVILLE)
    return _assemble_spm(spec, N, penalty)


def assemble_spm_caputo(spec: ProblemSpec, N: int, penalty: PenaltyConfig | None = None) -> LinearSystem:
    """(-S + cM + B) U = F_hat + F_tilde for the Caputo problem."""
    _check(spec, N, DerivKind.CAPUTO)
    return _assemble_spm(spec, N, penalty)


def assemble_pgs_tau(spec: ProblemSpec, N: int) -> LinearSystem:
    """Tau system: Galerkin rows 0..N-2, boundary rows at -1 and +1."""
    _check(spec, N)
    S, M = operator_matrices(spec.deriv_kind, spec.frac, spec.weight, N)
    A = -S + spec.c * M
    F = _rhs_vector(spec, weighting_table(spec.deriv_kind, spec.frac, N), N)
    A[N - 1] = boundary_operator_values(spec.bc_kind, spec.frac, N, -1)
    A[N] = boundary_operator_values(spec.bc_kind, spec.frac, N, 1)
    F[N - 1] = spec.g1
    F[N] = spec.g2
    return LinearSystem(A, F, Method.PGS_TAU, spec.basis(N))


def assemble(spec: ProblemSpec, N: int, method: Method = Method.SPM,
             penalty: PenaltyConfig | None = None) -> LinearSystem:
    method = Method(method)
    if method is Method.PGS_TAU:
        return assemble_pgs_tau(spec, N)
    if spec.deriv_kind is DerivKind.RIEMANN_LIOUVILLE:
        return assemble_spm_rl(spec, N, penalty)
    return assemble_spm_caputo(spec, N, penalty)
