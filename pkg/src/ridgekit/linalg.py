"""Minimal dense linear-algebra kernel: thin SVD and SPD solves.

Everything here operates on float64 numpy arrays and is a pure function of
its inputs, so values can be shared freely across threads.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg.lapack import dpotrf, dpotrs, dtrtri

from .errors import NotPositiveDefiniteError, SvdConvergenceError

# Relative off-diagonal threshold at which a column pair counts as orthogonal.
# One order tighter than the 1e-10 orthonormality contract on U and V.
JACOBI_TOL = 1e-11
DEFAULT_MAX_SWEEPS = 60
DEFAULT_TRUNCATION_TOL = 1e-12


def as_matrix(x, name="matrix") -> np.ndarray:
    """Validate and return ``x`` as a finite 2-d float64 array."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and one column")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def as_vector(x, name="vector") -> np.ndarray:
    """Validate and return ``x`` as a finite 1-d float64 array."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {v.shape}")
    if v.size < 1:
        raise ValueError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


@dataclass(frozen=True)
class ThinSvd:
    """Thin singular value decomposition x = u @ diag(d) @ v.T.

    ``u`` is n x r and ``v`` is p x r, both with orthonormal columns; ``d``
    holds the r retained singular values, strictly positive and
    non-increasing.
    """

    u: np.ndarray
    d: np.ndarray
    v: np.ndarray

    @property
    def rank(self) -> int:
        return self.d.size

    @property
    def shape(self) -> tuple:
        return (self.u.shape[0], self.v.shape[0])

    def reconstruct(self) -> np.ndarray:
        """Return u @ diag(d) @ v.T."""
        return (self.u * self.d) @ self.v.T


def _round_robin_rounds(m: int):
    """Disjoint column-pair schedule covering every pair exactly once.

    Circle method: position 0 stays fixed while the others rotate. Returns a
    list of (i, j) index-array pairs; each round's pairs are disjoint, so
    their rotations commute and can be applied vectorized.
    """
    even = m + (m % 2)
    idx = list(range(even))
    rounds = []
    for _ in range(even - 1):
        half = even // 2
        left = idx[:half]
        right = idx[half:][::-1]
        pairs = [(a, b) for a, b in zip(left, right) if a < m and b < m]
        ii = np.array([min(a, b) for a, b in pairs], dtype=np.intp)
        jj = np.array([max(a, b) for a, b in pairs], dtype=np.intp)
        rounds.append((ii, jj))
        idx = [idx[0]] + [idx[-1]] + idx[1:-1]
    return rounds


def _jacobi_orthogonalize(b: np.ndarray, max_sweeps: int, tol: float):
    """Orthogonalize the columns of ``b`` in place by plane rotations.

    Returns the accumulated right rotation matrix j such that the original
    b equals (rotated b) @ j.T. Raises SvdConvergenceError when a full sweep
    still sees an off-diagonal Gram ratio above ``tol`` after ``max_sweeps``
    sweeps.
    """
    m = b.shape[1]
    j = np.eye(m)
    if m == 1:
        return j
    rounds = _round_robin_rounds(m)
    worst = np.inf
    for _ in range(max_sweeps):
        worst = 0.0
        rotated = False
        for ii, jj in rounds:
            bi = b[:, ii]
            bj = b[:, jj]
            gij = np.einsum("ki,ki->i", bi, bj)
            gii = np.einsum("ki,ki->i", bi, bi)
            gjj = np.einsum("ki,ki->i", bj, bj)
            denom = np.sqrt(gii * gjj)
            ratio = np.divide(
                np.abs(gij), denom, out=np.zeros_like(gij), where=denom > 0.0
            )
            round_worst = float(ratio.max(initial=0.0))
            if round_worst > worst:
                worst = round_worst
            active = ratio > tol
            if not active.any():
                continue
            rotated = True
            ia = ii[active]
            ja = jj[active]
            ga = gij[active]
            theta = (gjj[active] - gii[active]) / (2.0 * ga)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(1.0 + theta * theta))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            cols_i = b[:, ia]
            cols_j = b[:, ja]
            b[:, ia] = c * cols_i - s * cols_j
            b[:, ja] = s * cols_i + c * cols_j
            rot_i = j[:, ia]
            rot_j = j[:, ja]
            j[:, ia] = c * rot_i - s * rot_j
            j[:, ja] = s * rot_i + c * rot_j
        if not rotated:
            # A sweep with no rotations verified every pair at once.
            return j
    raise SvdConvergenceError(max_sweeps, worst, b.shape)


def thin_svd(
    x,
    truncation_tol: float = DEFAULT_TRUNCATION_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> ThinSvd:
    """Thin SVD by one-sided Jacobi rotations.

    The factorization runs on whichever of x and x.T has min(n, p) columns,
    so the sweep cost scales with the smaller dimension. Singular values
    d_j <= truncation_tol * d_1 are dropped from the returned factors.

    Parameters
    ----------
    x : array-like, shape (n, p)
        Matrix to factor; all entries must be finite.
    truncation_tol : float
        Relative cutoff below which singular values are discarded.
    max_sweeps : int
        Sweep budget before SvdConvergenceError is raised.
    """
    a = as_matrix(x, "x")
    if truncation_tol < 0.0:
        raise ValueError("truncation_tol must be >= 0")
    n, p = a.shape
    transposed = p > n
    # Fortran order: the sweep kernel reads and writes whole columns.
    b = np.array(a.T if transposed else a, dtype=float, order="F")
    j = _jacobi_orthogonalize(b, max_sweeps, JACOBI_TOL)
    norms = np.sqrt(np.einsum("ij,ij->j", b, b))
    order = np.argsort(-norms, kind="stable")
    d = norms[order]
    if d[0] <= 0.0:
        raise ValueError("matrix is zero; thin SVD has no positive singular values")
    keep = d > truncation_tol * d[0]
    d = d[keep]
    u = b[:, order[keep]] / d
    v = j[:, order[keep]]
    if transposed:
        u, v = v, u
    return ThinSvd(u=np.ascontiguousarray(u), d=d, v=np.ascontiguousarray(v))


def cholesky_spd(a: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of an SPD matrix (no pivoting, no jitter).

    Assumes ``a`` is symmetric; see solve_spd for the checked entry point.
    Raises NotPositiveDefiniteError naming the failing pivot otherwise.
    """
    c, info = dpotrf(a, lower=1)
    if info > 0:
        raise NotPositiveDefiniteError(pivot=int(info))
    if info < 0:
        raise ValueError(f"illegal value in argument {-info} of Cholesky input")
    return c


def solve_cholesky(factor: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ z = b given the lower Cholesky factor of a."""
    z, info = dpotrs(factor, b, lower=1)
    if info != 0:
        raise ValueError(f"Cholesky solve failed with LAPACK info {info}")
    return z


def trace_inverse_cholesky(factor: np.ndarray) -> float:
    """tr(a^-1) from the lower Cholesky factor of a.

    Uses tr(a^-1) = ||L^-1||_F^2.
    """
    linv, info = dtrtri(factor, lower=1)
    if info != 0:
        raise ValueError(f"triangular inversion failed with LAPACK info {info}")
    return float(np.einsum("ij,ij->", linv, linv))


def solve_spd(a, b) -> np.ndarray:
    """Solve a @ z = b for symmetric positive definite ``a``.

    Parameters
    ----------
    a : array-like, shape (m, m)
        Symmetric within 1e-10 relative, positive definite.
    b : array-like, shape (m,)
        Right-hand side.
    """
    a = as_matrix(a, "a")
    b = as_vector(b, "b")
    m = a.shape[0]
    if a.shape[1] != m:
        raise ValueError(f"a must be square, got shape {a.shape}")
    if b.size != m:
        raise ValueError(f"b has length {b.size}, expected {m}")
    scale = np.abs(a).max()
    if scale > 0.0 and np.abs(a - a.T).max() > 1e-10 * scale:
        raise ValueError("a is not symmetric within 1e-10 relative tolerance")
    return solve_cholesky(cholesky_spd(a), b)
