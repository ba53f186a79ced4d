"""Successive projection algorithm and its row/column variants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .matrix import as_matrix, frobenius_norm


@dataclass(frozen=True)
class SpaResult:
    selected: np.ndarray  # original column indices, extraction order
    residual_norms: np.ndarray


def spa(M, r: int) -> SpaResult:
    """Greedy separable column selection.

    At each step the column of the residual with the largest l2 norm is
    extracted (lowest index on ties) and every column is projected onto the
    orthogonal complement of it. Stops early, returning fewer than ``r``
    indices, once the largest residual norm drops to ``1e-12 * ||M||_F``.
    """
    A = as_matrix(M)
    n = A.shape[1]
    if not 1 <= r <= n:
        raise DimensionError(f"r must be in [1, {n}], got {r}")
    R = A.copy()
    floor = 1e-12 * frobenius_norm(A)
    selected, norms = [], []
    for _ in range(r):
        sq = np.einsum("ij,ij->j", R, R)
        j = int(np.argmax(sq))
        nj = float(np.sqrt(sq[j]))
        if nj <= floor:
            break
        selected.append(j)
        norms.append(nj)
        u = R[:, j] / nj
        R -= np.outer(u, u @ R)
        R[:, j] = 0.0
    return SpaResult(np.array(selected, dtype=np.intp), np.array(norms))


def spa_columns(M, r2: int) -> np.ndarray:
    """SPAC: ``r2`` columns of ``M``, sorted."""
    return np.sort(spa(M, r2).selected)


def spa_rows(M, r1: int) -> np.ndarray:
    """SPAR: ``r1`` rows of ``M`` (SPA on the transpose), sorted."""
    return np.sort(spa(np.asarray(M).T, r1).selected)


def spa_plus(M, r1: int, r2: int):
    """SPA+: rows from SPA on ``M.T`` and columns from SPA on ``M``."""
    return spa_rows(M, r1), spa_columns(M, r2)
