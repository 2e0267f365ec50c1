"""Dense linear-algebra and root-finding kernels.

Thin wrappers over LAPACK (via numpy/scipy) that pin down the contracts the
Prony and spline code rely on: ordering of singular vectors, trimming of
polynomial coefficients and explicit rank / conditioning checks.
"""

import numpy as np
import scipy.linalg

from .errors import DegenerateInput, NumericalFailure, RankDeficient, SingularMatrix

TRIM_RTOL = 1e-14
RANK_RTOL = 1e-10
COND_LIMIT = 1e14


def smallest_right_singular_vectors(matrix, count=1):
    """Right singular vectors for the ``count`` smallest singular values.

    Vectors are unit-norm and ordered smallest singular value first.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("matrix must be a non-empty 2-D array")
    if count not in (1, 2) or a.shape[1] < count:
        raise ValueError("count must be 1 or 2 and not exceed the column count")
    try:
        _, _, vh = np.linalg.svd(a, full_matrices=a.shape[0] < a.shape[1])
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    # rows of vh are sorted by decreasing singular value (zeros last when wide)
    return [vh[-1 - i].conj() for i in range(count)]


def polynomial_roots(coefficients):
    """All roots of ``sum_k a_k z^k`` (coefficients low-to-high degree).

    Uses the eigenvalues of the companion matrix; LAPACK balances it first.
    """
    a = np.asarray(coefficients, dtype=complex).ravel()
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale == 0:
        raise DegenerateInput("all polynomial coefficients vanish")
    keep = np.nonzero(np.abs(a) > TRIM_RTOL * scale)[0]
    a = a[: keep[-1] + 1]
    deg = a.size - 1
    if deg < 1:
        raise DegenerateInput("polynomial has degree 0 after trimming")
    if np.all(a.imag == 0):
        a = a.real
    comp = np.zeros((deg, deg), dtype=a.dtype)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -a[:-1] / a[-1]
    try:
        return scipy.linalg.eigvals(comp, overwrite_a=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"companion eigenvalues did not converge: {exc}") from exc


def least_squares(matrix, rhs, preconditioner=None):
    """Minimise ``||W (A x - b)||_2`` through an SVD of ``W A``.

    Parameters
    ----------
    matrix : (rows, cols) array, rows >= cols
    rhs : (rows,) array
    preconditioner : (rows,) real array, optional
        Diagonal of ``W``; identity when omitted.

    Returns
    -------
    x : (cols,) complex array
    residual : float
        ``||W (A x - b)||_2``.
    """
    a = np.asarray(matrix, dtype=complex)
    b = np.asarray(rhs, dtype=complex).ravel()
    rows, cols = a.shape
    if rows < cols:
        raise ValueError(f"underdetermined system ({rows} x {cols})")
    if b.size != rows:
        raise ValueError("rhs length does not match matrix rows")
    if preconditioner is not None:
        w = np.asarray(preconditioner, dtype=float).ravel()
        if w.size != rows:
            raise ValueError("preconditioner length does not match matrix rows")
        a = w[:, None] * a
        b = w * b
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    if cols and (s[0] == 0 or s[-1] < RANK_RTOL * s[0]):
        rank = int(np.sum(s > RANK_RTOL * s[0])) if s[0] else 0
        raise RankDeficient(f"numerical rank {rank} < {cols} columns")
    x = vh.conj().T @ ((u.conj().T @ b) / s)
    residual = float(np.linalg.norm(a @ x - b))
    return x, residual


def solve_square(matrix, rhs):
    a = np.asarray(matrix)
    b = np.asarray(rhs).ravel()
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrix(f"condition number {cond:.3g} exceeds {COND_LIMIT:.0e}")
    return np.linalg.solve(a, b)
