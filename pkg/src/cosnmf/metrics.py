"""Recovery and approximation measures."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DimensionError
from .factors import compute_factors
from .matrix import as_matrix, frobenius_norm, index_set, pinv_small, submatrix


def index_accuracy(k1, k2, k1_star, k2_star) -> float:
    """Fraction of the planted row and column indices that were found."""
    k1s, k2s = set(np.ravel(k1_star).tolist()), set(np.ravel(k2_star).tolist())
    if not k1s and not k2s:
        raise DimensionError("planted sets are empty")
    hit = len(k1s & set(np.ravel(k1).tolist())) + len(k2s & set(np.ravel(k2).tolist()))
    return hit / (len(k1s) + len(k2s))


def relative_approx_cosep(M, k1, k2, **kw) -> float:
    """``1 - ||M - P1 M(k1, k2) P2||_F / ||M||_F`` with fitted ``P1, P2``.

    Keyword arguments go to :func:`compute_factors`.
    """
    return 1.0 - compute_factors(M, k1, k2, **kw).rel_residual


def relative_approx_generic(M, Mhat) -> float:
    """``1 - ||M - Mhat||_F / ||M||_F``; may be negative."""
    M = np.asarray(M, dtype=np.float64)
    Mhat = np.asarray(Mhat, dtype=np.float64)
    if M.shape != Mhat.shape:
        raise DimensionError(f"shape mismatch {M.shape} vs {Mhat.shape}")
    return 1.0 - frobenius_norm(M - Mhat) / frobenius_norm(M)


def hard_cluster(P) -> np.ndarray:
    """Binary assignment with a single 1 per row at the row argmax.

    ``np.argmax`` returns the first maximum, so ties go to the lowest column.
    """
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] < 1:
        raise DimensionError("P must be 2-D with at least one column")
    Q = np.zeros(P.shape)
    Q[np.arange(P.shape[0]), np.argmax(P, axis=1)] = 1.0
    return Q


def clustering_accuracy(Q, Qstar) -> float:
    """``1 - min_perm sqrt(||Q[:, perm] - Q*||_F / (r n))``.

    The column permutation maximizing the number of agreeing ones is found
    as a linear assignment on the ``r x r`` confusion counts; it also
    minimizes the mismatch norm.
    """
    Q = np.asarray(Q, dtype=np.float64)
    Qstar = np.asarray(Qstar, dtype=np.float64)
    if Q.shape != Qstar.shape or Q.ndim != 2:
        raise DimensionError(f"shape mismatch {Q.shape} vs {Qstar.shape}")
    n, r = Q.shape
    confusion = Q.T @ Qstar
    rows, cols = linear_sum_assignment(confusion, maximize=True)
    perm = np.empty(r, dtype=np.intp)
    perm[cols] = rows
    return 1.0 - np.sqrt(frobenius_norm(Q[:, perm] - Qstar) / (r * n))


def cur_residual(M, k1, k2) -> float:
    """``||M - M(:, k2) pinv(M(k1, k2)) M(k1, :)||_F / ||M||_F``."""
    A = as_matrix(M)
    k1 = index_set(k1, A.shape[0])
    k2 = index_set(k2, A.shape[1])
    U = pinv_small(submatrix(A, k1, k2))
    R = A - A[:, k2] @ U @ A[k1, :]
    normM = frobenius_norm(A)
    return frobenius_norm(R) / normM if normM > 0 else 0.0
