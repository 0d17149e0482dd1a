"""Drivers: single solves, error measurement, sweeps and the diffusion run."""
from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .assembly import (
    BCKind,
    DerivKind,
    Method,
    ProblemSpec,
    assemble,
    default_penalty,
    operator_matrices,
    penalty_matrix,
)
from .errors import ConfigurationError
from .fracbasis import BasisDescriptor, SolutionExpansion, solve_mu_nu
from .linalg import eigenvalues, lu_factor
from .penalty import penalty_caputo_fnbc, penalty_rl_fnbc
from .specialfn import JacobiParams, gauss_jacobi, jacobi_norm, jacobi_table

__all__ = [
    "ERROR_GRID",
    "solve",
    "linf_error",
    "ConvergenceRow",
    "ConvergenceReport",
    "reference_solution",
    "convergence_sweep",
    "penalty_sweep",
    "EigenRow",
    "eigen_sweep",
    "tent",
    "project_initial",
    "DiffusionRun",
    "diffusion_run",
]

ERROR_GRID = -1.0 + 2.0 * np.arange(1, 1001) / 1001.0
REFERENCE_N = 512
_CACHE_ENV = "FRACSPM_CACHE_DIR"


def solve(spec: ProblemSpec, N: int, method: Method = Method.SPM,
          rho_multiplier: float = 1.0) -> SolutionExpansion:
    """Assemble and solve one problem; the SPM penalty is the default one scaled by rho_multiplier."""
    method = Method(method)
    penalty = None
    if method is Method.SPM:
        penalty = default_penalty(spec, N)
        if rho_multiplier != 1.0:
            penalty = penalty.with_multiplier(rho_multiplier)
    system = assemble(spec, N, method, penalty)
    return SolutionExpansion(spec.basis(N), system.solve())


def _values(obj, x):
    if isinstance(obj, SolutionExpansion):
        return obj(x)
    return np.asarray(obj(x), dtype=float) * np.ones_like(x)


def linf_error(candidate, reference, grid: np.ndarray = ERROR_GRID) -> float:
    """Max |candidate - reference| over 1000 equispaced interior points."""
    return float(np.max(np.abs(_values(candidate, grid) - _values(reference, grid))))


class ConvergenceRow(NamedTuple):
    N: int
    rho_minus: float
    rho_plus: float
    linf_error: float
    decay_ratio: float


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple
    method: Method
    spec_digest: dict

    def errors(self) -> np.ndarray:
        return np.array([r.linf_error for r in self.rows])


def _digest(spec: ProblemSpec) -> str:
    blob = json.dumps(spec.summary(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


_REFERENCE_MEMO: dict = {}


def reference_solution(spec: ProblemSpec, N: int = REFERENCE_N,
                       cache_dir: str | os.PathLike | None = None) -> SolutionExpansion:
    """SPM solution at large N, memoized and optionally stored on disk.

    Files are keyed by a hash of the problem summary and N, so a cached
    reference is reused only for the identical problem.
    """
    key = (_digest(spec), N)
    if key in _REFERENCE_MEMO:
        return _REFERENCE_MEMO[key]
    cache_dir = cache_dir or os.environ.get(_CACHE_ENV)
    path = Path(cache_dir) / f"reference-{key[0]}-N{N}.npy" if cache_dir else None
    if path is not None and path.exists():
        ref = SolutionExpansion(spec.basis(N), np.load(path))
    else:
        ref = solve(spec, N, Method.SPM)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            np.save(path, np.asarray(ref.coeffs))
    _REFERENCE_MEMO[key] = ref
    return ref


def _reference(spec: ProblemSpec, reference, reference_N: int):
    if reference is not None:
        return reference
    if spec.exact is not None:
        return spec.exact
    return reference_solution(spec, reference_N)


def _rows(errors, rhos, Ns) -> tuple:
    rows = []
    for j, (N, (rm, rp), err) in enumerate(zip(Ns, rhos, errors)):
        ratio = err / errors[j - 1] if j > 0 and errors[j - 1] != 0.0 else float("nan")
        rows.append(ConvergenceRow(int(N), rm, rp, err, ratio))
    return tuple(rows)


def convergence_sweep(spec: ProblemSpec, N_list: Sequence[int], method: Method = Method.SPM,
                      reference=None, reference_N: int = REFERENCE_N) -> ConvergenceReport:
    """L-infinity errors over N; reference is the exact solution or SPM at N = 512."""
    method = Method(method)
    N_list = list(N_list)
    if N_list != sorted(N_list):
        raise ConfigurationError("N_list must be ascending")
    ref = _reference(spec, reference, reference_N)
    errors, rhos = [], []
    for N in N_list:
        errors.append(linf_error(solve(spec, N, method), ref))
        if method is Method.SPM:
            pen = default_penalty(spec, N)
            rhos.append((pen.rho_minus, pen.rho_plus))
        else:
            rhos.append((float("nan"), float("nan")))
    return ConvergenceReport(_rows(errors, rhos, N_list), method, spec.summary())


def penalty_sweep(spec: ProblemSpec, N: int, rho_multipliers: Sequence[float],
                  reference=None, reference_N: int = REFERENCE_N) -> ConvergenceReport:
    """SPM errors at fixed N with both penalty parameters scaled by each multiplier."""
    rows = []
    if len(rho_multipliers):
        ref = _reference(spec, reference, reference_N)
        base = default_penalty(spec, N)
        for s in rho_multipliers:
            err = linf_error(solve(spec, N, Method.SPM, s), ref)
            rows.append(ConvergenceRow(N, base.rho_minus * s, base.rho_plus * s, err, float("nan")))
    return ConvergenceReport(tuple(rows), Method.SPM, spec.summary())


class EigenRow(NamedTuple):
    alpha: float
    p: float
    N: int
    min_real_part: float
    min_symmetric_eig: float


def _eigen_point(args) -> EigenRow:
    template, alpha, p, N = args
    spec = template.reparametrized(alpha, p)
    summary = eigenvalues(assemble(spec, N, Method.SPM).matrix)
    return EigenRow(alpha, p, N, summary.min_real_part, summary.min_symmetric_eig)


def _map(fn, items, workers: int | None):
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def eigen_sweep(spec_template: ProblemSpec, alphas: Sequence[float], N: int,
                p_list: Sequence[float], workers: int | None = None) -> list[EigenRow]:
    """Spectrum diagnostics of the SPM matrix with default penalties over an (alpha, p) grid.

    Rows come back ordered by p, then alpha, regardless of the worker count.
    """
    jobs = [(spec_template, float(a), float(p), N) for p in p_list for a in alphas]
    return _map(_eigen_point, jobs, workers)


# -- time-dependent problem ---------------------------------------------------


def tent(x):
    """5 - 25|x| on |x| < 0.2, zero elsewhere (unit mass)."""
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) < 0.2, 5.0 - 25.0 * np.abs(x), 0.0)


_TENT_BREAKS = (-1.0, -0.2, 0.0, 0.2, 1.0)


def _composite_rule(breaks, n):
    rule = gauss_jacobi(n, (0.0, 0.0))
    xs, ws = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        xs.append(0.5 * (hi - lo) * rule.nodes + 0.5 * (hi + lo))
        ws.append(0.5 * (hi - lo) * rule.weights)
    return np.concatenate(xs), np.concatenate(ws)


def project_initial(basis: BasisDescriptor, initial: Callable, breaks=_TENT_BREAKS,
                    panel_size: int | None = None) -> SolutionExpansion:
    """Orthogonal projection of the initial condition onto the trial space.

    Poly-fractonomials: u_k = integral(u0 P_k^{mu,nu}) / gamma_k^{mu,nu};
    Legendre: u_k = integral(u0 L_k) (2k+1)/2. Integrals use Gauss-Legendre
    panels between the given break points (the kinks of u0).
    """
    N = basis.N
    n = panel_size or max(32, N // 2 + 2)
    x, w = _composite_rule(breaks, n)
    params = basis.jacobi_params
    moments = jacobi_table(N, params, x) @ (np.asarray(initial(x), dtype=float) * w)
    return SolutionExpansion(basis, moments / jacobi_norm(np.arange(N + 1), params))


@dataclass(frozen=True, eq=False)
class DiffusionRun:
    snapshots: tuple
    mass_series: tuple
    dt: float
    steps: int

    def snapshot(self, t: float) -> SolutionExpansion:
        for time, sol in self.snapshots:
            if abs(time - t) <= 1e-12:
                return sol
        raise KeyError(t)


def diffusion_run(deriv_kind, alpha: float, p: float, N: int, dt: float, t_end: float,
                  initial: Callable = tent, snapshot_times: Sequence[float] = (0.0, 0.05, 0.1, 2.0)
                  ) -> DiffusionRun:
    """Implicit Euler for u_t = d/dx (flux of u) with zero flux at both ends.

    Each step solves (M/dt - S + B) u^{n+1} = (M/dt) u^n with one LU
    factorization reused throughout.
    """
    deriv = DerivKind(deriv_kind)
    if dt <= 0.0 or t_end < 0.0:
        raise ConfigurationError("dt must be positive and t_end non-negative")
    steps = int(round(t_end / dt))
    if abs(steps * dt - t_end) > 1e-9 * max(1.0, t_end):
        raise ConfigurationError("t_end must be a multiple of dt")
    marks = {}
    for t in snapshot_times:
        k = int(round(t / dt))
        if abs(k * dt - t) > 1e-9 * max(1.0, t) or k > steps:
            raise ConfigurationError(f"snapshot time {t} is not a step of the run")
        marks[k] = t
    frac = solve_mu_nu(alpha, p)
    weight = JacobiParams(0.0, 0.0)
    if deriv is DerivKind.RIEMANN_LIOUVILLE:
        bc, penalty = BCKind.RL_FNBC, penalty_rl_fnbc(N, frac)
        basis = BasisDescriptor.poly_fractonomial(N, frac)
    else:
        bc, penalty = BCKind.CAPUTO_FNBC, penalty_caputo_fnbc(N)
        basis = BasisDescriptor.legendre(N)
    S, M = operator_matrices(deriv, frac, weight, N)
    B, _, _ = penalty_matrix(bc, frac, weight, N, penalty)
    lu = lu_factor(M / dt - S + B)
    mass_scale = float(jacobi_norm(0, basis.jacobi_params))
    u = np.asarray(project_initial(basis, initial).coeffs)
    snapshots, mass = [], [(0.0, mass_scale * u[0])]
    if 0 in marks:
        snapshots.append((marks[0], SolutionExpansion(basis, u)))
    for n in range(1, steps + 1):
        u = lu.solve(M @ u / dt)
        t = n * dt
        mass.append((t, mass_scale * u[0]))
        if n in marks:
            snapshots.append((marks[n], SolutionExpansion(basis, u)))
    return DiffusionRun(tuple(snapshots), tuple(mass), dt, steps)
