"""Dense matrix primitives.

Matrices are plain ``numpy.ndarray`` objects of dtype float64; index sets
are 1-D integer arrays. The helpers here validate those carriers and
provide the few small numerical kernels the solvers depend on (power
iteration, one-sided Jacobi SVD, pseudoinverse, Sinkhorn balancing).
"""

from __future__ import annotations

import numpy as np

from .errors import BalanceError, DimensionError, InvalidInputError, UnsupportedSizeError

JACOBI_MAX_DIM = 64


def as_matrix(M, nonnegative=False) -> np.ndarray:
    """Return ``M`` as a 2-D float64 array, validating its entries.

    With ``nonnegative=True`` any negative or non-finite entry is rejected.
    """
    A = np.asarray(M, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix has non-finite entries")
    if nonnegative and np.any(A < 0):
        raise InvalidInputError("matrix has negative entries")
    return A


def index_set(indices, bound: int, sort=True) -> np.ndarray:
    """Validate a set of 0-based indices into a dimension of size ``bound``.

    Returns a strictly increasing int array (or the input order when
    ``sort=False``). Duplicates and out-of-range entries raise
    :class:`DimensionError`.
    """
    idx = np.asarray(indices, dtype=np.intp).reshape(-1)
    if idx.size and (idx.min() < 0 or idx.max() >= bound):
        raise DimensionError(f"index out of range for dimension {bound}: {idx.tolist()}")
    if np.unique(idx).size != idx.size:
        raise DimensionError(f"duplicate indices: {idx.tolist()}")
    return np.sort(idx) if sort else idx


def submatrix(M, rows=None, cols=None) -> np.ndarray:
    """Select the block ``M(rows, cols)``; ``None`` means all.

    Row and column order follow the given index sets.
    """
    A = np.asarray(M, dtype=np.float64)
    r = slice(None) if rows is None else index_set(rows, A.shape[0], sort=False)
    c = slice(None) if cols is None else index_set(cols, A.shape[1], sort=False)
    if rows is None or cols is None:
        return A[r, c].copy()
    return A[np.ix_(r, c)]


def frobenius_norm(M) -> float:
    return float(np.sqrt(np.sum(np.square(np.asarray(M, dtype=np.float64)))))


def spectral_norm_sq(M, tol=1e-12, max_iter=10000) -> float:
    """Largest squared singular value of ``M`` by power iteration.

    Iterates on the smaller of ``M.T @ M`` and ``M @ M.T`` from the all-ones
    vector and stops once successive Rayleigh quotients agree to ``tol``
    relative. If the result falls below the largest Gram diagonal (which
    bounds sigma_max^2 from below), the start was deficient in the top
    eigenvector and the iteration is rerun from the matching basis vector.
    """
    A = as_matrix(M)
    G = A.T @ A if A.shape[1] <= A.shape[0] else A @ A.T
    dmax = float(np.max(np.diag(G)))
    if dmax == 0.0:
        return 0.0
    rho = _power_rayleigh(G, np.ones(G.shape[0]), tol, max_iter)
    if rho < dmax * (1.0 - 1e-10):
        e = np.zeros(G.shape[0])
        e[int(np.argmax(np.diag(G)))] = 1.0
        rho = max(rho, _power_rayleigh(G, e, tol, max_iter))
    return rho


def _power_rayleigh(G, v, tol, max_iter):
    v = v / np.linalg.norm(v)
    rho_prev = None
    rho = 0.0
    for _ in range(max_iter):
        w = G @ v
        rho = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if rho_prev is not None and abs(rho - rho_prev) < tol * abs(rho):
            break
        rho_prev = rho
    return rho


def jacobi_svd(S, tol=1e-15, max_sweeps=100):
    """One-sided (Hestenes) Jacobi SVD of a small matrix.

    Returns ``(U, sigma, V)`` with ``S = U @ diag(sigma) @ V.T``, ``sigma``
    nonincreasing, and ``U``, ``V`` column-orthonormal. Only meant for cores
    with ``min(S.shape) <= 64``.
    """
    A = as_matrix(S)
    if min(A.shape) > JACOBI_MAX_DIM:
        raise UnsupportedSizeError(
            f"jacobi_svd supports min(rows, cols) <= {JACOBI_MAX_DIM}, got {A.shape}")
    transposed = A.shape[0] < A.shape[1]
    if transposed:
        A = A.T
    m, n = A.shape
    U = A.copy()
    V = np.eye(n)
    for _ in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                a = U[:, i] @ U[:, i]
                b = U[:, j] @ U[:, j]
                g = U[:, i] @ U[:, j]
                if abs(g) <= tol * np.sqrt(a * b) or g == 0.0:
                    continue
                rotated = True
                # t = sign(zeta) / (|zeta| + hypot(1, zeta)), zeta = (b - a) / 2g,
                # rewritten so a tiny g cannot overflow
                d = b - a
                t = np.copysign(1.0, d) * 2.0 * g / (abs(d) + np.hypot(2.0 * g, d)) if d != 0.0 \
                    else np.copysign(1.0, g)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                ui = U[:, i].copy()
                U[:, i] = c * ui - s * U[:, j]
                U[:, j] = s * ui + c * U[:, j]
                vi = V[:, i].copy()
                V[:, i] = c * vi - s * V[:, j]
                V[:, j] = s * vi + c * V[:, j]
        if not rotated:
            break
    sigma = np.linalg.norm(U, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    U = U[:, order]
    V = V[:, order]
    smax = sigma[0] if sigma.size else 0.0
    for k in range(n):
        if sigma[k] > smax * 1e-300 and sigma[k] > 0.0:
            U[:, k] /= sigma[k]
        else:
            U[:, k] = _orthonormal_complement(U[:, :k], m)
    if transposed:
        return V, sigma, U
    return U, sigma, V


def _orthonormal_complement(Q, m):
    """A unit vector orthogonal to the (orthonormal) columns of ``Q``."""
    for e in np.eye(m):
        v = e.copy()
        for _ in range(2):
            v -= Q @ (Q.T @ v)
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            return v / nv
    raise DimensionError("no orthogonal complement available")


def pinv_small(S, rank_tol=1e-12) -> np.ndarray:
    """Moore-Penrose pseudoinverse through :func:`jacobi_svd`.

    Singular values below ``rank_tol * sigma_max`` are treated as zero.
    """
    A = as_matrix(S)
    U, sigma, V = jacobi_svd(A)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.zeros((A.shape[1], A.shape[0]))
    keep = sigma > rank_tol * sigma[0]
    return (V[:, keep] / sigma[keep]) @ U[:, keep].T


def sinkhorn_balance(M, max_iter=1000, tol=1e-10):
    """Alternating column/row scaling of a positive matrix.

    Returns ``(d_r, d_c)`` such that ``diag(d_r) @ M @ diag(d_c)`` has unit
    column sums and row sums ``n/m``. Columns are scaled first, then rows;
    the loop ends when all column sums are within ``tol`` of 1 (row sums are
    exact after each row step) or after ``max_iter`` sweeps.
    """
    A = as_matrix(M, nonnegative=True)
    m, n = A.shape
    if np.any(A.sum(axis=0) == 0.0) or np.any(A.sum(axis=1) == 0.0):
        raise BalanceError("cannot balance a matrix with a zero row or column")
    row_target = n / m
    d_r = np.ones(m)
    d_c = np.ones(n)
    for _ in range(max_iter):
        d_c = 1.0 / (d_r @ A)
        d_r = row_target / (A @ d_c)
        col_sums = (d_r @ A) * d_c
        if np.max(np.abs(col_sums - 1.0)) <= tol:
            break
    return d_r, d_c
