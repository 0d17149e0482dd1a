"""Dense LU solves and eigenvalue diagnostics.

Thin, checked wrappers around LAPACK: partial-pivoting LU (getrf/getrs) for
the linear systems and the balanced Hessenberg/Francis QR path (geev) for
spectra. The symmetric part uses the symmetric tridiagonal QR (syevd).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConfigurationError, SingularMatrixError

__all__ = ["LUFactorization", "lu_factor", "lu_solve", "EigenSummary", "eigenvalues"]

_PIVOT_FLOOR = 1e-300


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ConfigurationError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ConfigurationError("matrix has non-finite entries")
    return a


@dataclass(frozen=True, eq=False)
class LUFactorization:
    """Row-pivoted LU factors, reusable for many right-hand sides."""

    lu: np.ndarray
    piv: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", self.lu.shape[0])
        self.lu.flags.writeable = False

    def solve(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        if b.shape[0] != self.n:
            raise ConfigurationError(f"right-hand side has length {b.shape[0]}, expected {self.n}")
        return scipy.linalg.lu_solve((self.lu, self.piv), b, check_finite=False)

    def det_sign(self) -> float:
        """Sign of det(A) from the diagonal of U and the pivot parity."""
        swaps = np.count_nonzero(self.piv != np.arange(self.n))
        return float((-1) ** swaps * np.prod(np.sign(np.diag(self.lu))))


def lu_factor(a) -> LUFactorization:
    """Partial-pivoting LU; a pivot below 1e-300 in magnitude is singular."""
    a = _as_square(a)
    with warnings.catch_warnings():
        # an exactly zero pivot is reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) < _PIVOT_FLOOR:
        k = int(np.argmin(pivots))
        raise SingularMatrixError(f"zero pivot {pivots[k]:.3e} at step {k} of {a.shape[0]}")
    return LUFactorization(lu, piv)


def lu_solve(a, b) -> np.ndarray:
    return lu_factor(a).solve(b)


@dataclass(frozen=True, eq=False)
class EigenSummary:
    eigenvalues: np.ndarray
    min_real_part: float
    min_symmetric_eig: float


def eigenvalues(a) -> EigenSummary:
    """Full spectrum of A plus the smallest eigenvalue of (A + A^T)/2."""
    a = _as_square(a)
    if a.shape[0] > 2048:
        raise ConfigurationError("eigenvalue diagnostic is limited to n <= 2048")
    ev = scipy.linalg.eigvals(a, check_finite=False)
    sym = scipy.linalg.eigvalsh(0.5 * (a + a.T), check_finite=False)
    ev.flags.writeable = False
    return EigenSummary(ev, float(np.min(ev.real)), float(sym[0]))
