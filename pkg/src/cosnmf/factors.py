"""Nonnegative factor fitting with HALS coordinate descent.

``compute_factors`` fits ``M ~ P1 @ M(K1, K2) @ P2`` for a fixed core by
alternating nonnegative least squares; ``ahals_nmf`` is the plain
accelerated HALS NMF used as a baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.optimize import nnls as _lawson_hanson

from .errors import DegenerateError, DimensionError
from .matrix import as_matrix, frobenius_norm, index_set, submatrix


@dataclass
class CosFactors:
    P1: np.ndarray
    S: np.ndarray
    P2: np.ndarray
    rel_residual: float
    iterations: int = 0
    residual_trace: list = field(default_factory=list)

    def reconstruct(self) -> np.ndarray:
        return self.P1 @ self.S @ self.P2


@numba.njit(cache=True, nogil=True)
def _hals_passes(G, C, V, active, max_passes, tol):
    r, n = V.shape
    first = 0.0
    passes = 0
    for p in range(max_passes):
        change = 0.0
        for k in range(r):
            if not active[k]:
                continue
            gkk = G[k, k]
            for j in range(n):
                s = C[k, j]
                for i in range(r):
                    s -= G[k, i] * V[i, j]
                old = V[k, j]
                new = old + s / gkk
                if new < 0.0:
                    new = 0.0
                V[k, j] = new
                change += (new - old) * (new - old)
        passes = p + 1
        if p == 0:
            first = change
        if change <= tol * tol * first:
            break
    return passes


def nnls_hals(A, W, V0=None, inner_iters=500, tol=1e-8) -> np.ndarray:
    """Approximately solve ``min_{V >= 0} ||A - W V||_F``.

    Cyclic exact row updates (HALS). Without ``V0`` the start is the
    unconstrained least-squares solution clipped at zero. Passes stop when the
    squared-norm change of a pass is at most ``tol`` times that of the first
    pass (in norm), or after ``inner_iters`` passes. Rows whose Gram diagonal
    is below ``1e-16 * max(diag(W.T W))`` are set to zero and left alone.
    """
    A = np.asarray(A, dtype=np.float64)
    W = np.asarray(W, dtype=np.float64)
    if A.ndim != 2 or W.ndim != 2 or W.shape[0] != A.shape[0]:
        raise DimensionError(f"incompatible shapes A{A.shape} and W{W.shape}")
    G = W.T @ W
    C = W.T @ A
    if V0 is None:
        V = np.maximum(np.linalg.lstsq(W, A, rcond=None)[0], 0.0)
    else:
        V = np.array(V0, dtype=np.float64)
        if V.shape != (W.shape[1], A.shape[1]):
            raise DimensionError(f"V0 has shape {V.shape}, expected {(W.shape[1], A.shape[1])}")
    d = np.diag(G)
    active = d > 1e-16 * d.max() if d.size and d.max() > 0 else np.zeros(d.size, dtype=bool)
    V[~active] = 0.0
    V = np.ascontiguousarray(V)
    _hals_passes(G, np.ascontiguousarray(C), V, active, int(inner_iters), float(tol))
    return V


def nnls_active_set(A, W) -> np.ndarray:
    """Column-by-column exact NNLS (Lawson-Hanson active set)."""
    A = np.asarray(A, dtype=np.float64)
    W = np.asarray(W, dtype=np.float64)
    if W.shape[0] != A.shape[0]:
        raise DimensionError(f"incompatible shapes A{A.shape} and W{W.shape}")
    V = np.empty((W.shape[1], A.shape[1]))
    for j in range(A.shape[1]):
        V[:, j] = _lawson_hanson(W, A[:, j], maxiter=50 * W.shape[1])[0]
    return V


def compute_factors(M, k1, k2, max_iter=200, delta=1e-8,
                    inner_iters=500, nnls_tol=1e-8, solver="hals") -> CosFactors:
    """Fit nonnegative ``P1``, ``P2`` with ``M ~ P1 @ M(k1, k2) @ P2``.

    ``P1`` starts as the NNLS fit of ``M`` on the rows ``M(k1, :)`` and
    ``P2`` as the fit on the columns ``M(:, k2)``; then ``P2`` and ``P1`` are
    refit alternately until ``||dP1||_F + ||dP2||_F <= delta``.

    ``solver="hals"`` uses :func:`nnls_hals` (warm-started) for every
    subproblem; ``solver="active_set"`` solves each one exactly, which
    matters when the core has more rows or columns than its rank and the
    noiseless fit should reach machine precision.
    """
    if solver == "hals":
        def fit(A_, W_, V0):
            return nnls_hals(A_, W_, V0, inner_iters, nnls_tol)
    elif solver == "active_set":
        def fit(A_, W_, V0):
            return nnls_active_set(A_, W_)
    else:
        raise ValueError(f"unknown solver {solver!r}")

    A = as_matrix(M, nonnegative=True)
    m, n = A.shape
    k1 = index_set(k1, m)
    k2 = index_set(k2, n)
    S = submatrix(A, k1, k2)
    if not np.any(S > 0):
        raise DegenerateError("core M(k1, k2) is all zero")
    normM = frobenius_norm(A)

    P1 = fit(A.T, submatrix(A, k1, None).T, None).T
    P2 = fit(A, submatrix(A, None, k2), None)

    def rel(P1, P2):
        return frobenius_norm(A - P1 @ S @ P2) / normM if normM > 0 else 0.0

    trace = [rel(P1, P2)]
    it = 0
    for it in range(1, max_iter + 1):
        P1_prev, P2_prev = P1, P2
        P2 = fit(A, P1 @ S, P2)
        P1 = fit(A.T, (S @ P2).T, P1.T).T
        trace.append(rel(P1, P2))
        e = frobenius_norm(P1 - P1_prev) + frobenius_norm(P2 - P2_prev)
        if e <= delta:
            break
    return CosFactors(P1=P1, S=S, P2=P2, rel_residual=trace[-1],
                      iterations=it, residual_trace=trace)


def ahals_nmf(M, r: int, max_iter=1000, seed=0, alpha=0.5, delta=0.1):
    """Accelerated HALS NMF, ``M ~ W @ H`` with ``W, H >= 0``.

    Seeded uniform initialization scaled so ``||W H||_F = ||M||_F``. Each
    half-step repeats HALS passes on one factor up to
    ``1 + alpha * rho`` times, where ``rho`` is the cost ratio of forming the
    Gram products to one pass, stopping early once a pass changes the factor
    by less than ``delta`` times the first one.
    """
    A = as_matrix(M, nonnegative=True)
    m, n = A.shape
    if not 1 <= r <= min(m, n):
        raise DimensionError(f"r must be in [1, {min(m, n)}], got {r}")
    rng = np.random.default_rng(seed)
    W = rng.random((m, r))
    H = rng.random((r, n))
    wh = frobenius_norm(W @ H)
    if wh > 0:
        s = np.sqrt(frobenius_norm(A) / wh)
        W *= s
        H *= s
    passes_w = int(np.floor(1 + alpha * (1 + (m * n + n * r) / (m * (r + 1)))))
    passes_h = int(np.floor(1 + alpha * (1 + (m * n + m * r) / (n * (r + 1)))))
    for _ in range(max_iter):
        W = nnls_hals(A.T, H.T, W.T, passes_w, delta).T
        H = nnls_hals(A, W, H, passes_h, delta)
    return W, H
