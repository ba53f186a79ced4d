"""Alternating selection of a row set and a column set (co-separable NMF).

Rows are chosen by the self-dictionary solver on the transpose of the
column-restricted matrix, columns on the row-restricted matrix, and the two
steps alternate until the selection stops moving.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateError, DimensionError, InvalidInputError
from .factors import compute_factors, nnls_active_set
from .fgm import FgmParams, fgm_snmf, postprocess_diag, postprocess_spa
from .matrix import as_matrix, frobenius_norm, index_set, submatrix

POSTPROCESS = ("diag", "spa")


@dataclass(frozen=True)
class CosSelectParams:
    r1: int
    r2: int
    delta: float = 1e-6
    outer_max_iter: int = 50
    fgm: FgmParams = field(default_factory=FgmParams)
    postprocess: str = "diag"

    def __post_init__(self):
        if self.r1 < 1 or self.r2 < 1:
            raise DimensionError("r1 and r2 must be positive")
        if not self.delta > 0:
            raise InvalidInputError(f"delta must be positive, got {self.delta}")
        if self.outer_max_iter < 1:
            raise InvalidInputError("outer_max_iter must be >= 1")
        if self.postprocess not in POSTPROCESS:
            raise InvalidInputError(f"postprocess must be one of {POSTPROCESS}")


@dataclass
class CosSelection:
    k1: np.ndarray
    k2: np.ndarray
    outer_iterations: int = 0
    converged: bool = False


def _select(A, r, params: CosSelectParams, what: str, outer: int) -> np.ndarray:
    # zero columns carry no information and would make the Omega weights
    # undefined; solve on the rest and map back
    keep = np.flatnonzero(A.sum(axis=0) > 0)
    if keep.size < r:
        raise DegenerateError(
            f"pass {outer}: only {keep.size} nonzero candidates for {r} {what}",
            partial=keep)
    out = fgm_snmf(A[:, keep], params.fgm)
    try:
        if params.postprocess == "diag":
            sel = postprocess_diag(out.Y, r)
        else:
            sel = postprocess_spa(out.Y, r)
    except DegenerateError as exc:
        raise DegenerateError(f"pass {outer}, selecting {what}: {exc}",
                              partial=keep[exc.partial]) from exc
    return np.sort(keep[sel])


def cos_fgm(M, params: CosSelectParams) -> CosSelection:
    """Co-select ``r1`` rows and ``r2`` columns of ``M``.

    Each outer pass picks ``K1`` from ``fgm_snmf(M(:, K2).T)`` (all columns
    on the first pass) and then ``K2`` from ``fgm_snmf(M(K1, :))``. The loop
    stops when the selection repeats the previous pass, when
    ``||M_X - M_X_prev||_F + ||M_Y - M_Y_prev||_F <= delta`` (from the second
    pass on, once both restricted matrices have fixed shapes), or after
    ``outer_max_iter`` passes.
    """
    A = as_matrix(M, nonnegative=True)
    m, n = A.shape
    if params.r1 > m or params.r2 > n:
        raise DimensionError(f"r1={params.r1}, r2={params.r2} exceed shape {A.shape}")
    if np.any(A.sum(axis=1) == 0) or np.any(A.sum(axis=0) == 0):
        raise InvalidInputError("M has a zero row or column")

    MY = A
    MX_prev = MY_prev = None
    k1_prev = k2_prev = None
    converged = False
    it = 0
    for it in range(1, params.outer_max_iter + 1):
        k1 = _select(MY.T, params.r1, params, "rows", it)
        MX = A[k1, :]
        k2 = _select(MX, params.r2, params, "columns", it)
        MY = A[:, k2]
        if k1_prev is not None:
            if np.array_equal(k1, k1_prev) and np.array_equal(k2, k2_prev):
                converged = True
                break
            e = frobenius_norm(MX - MX_prev) + frobenius_norm(MY - MY_prev)
            if e <= params.delta:
                converged = True
                break
        k1_prev, k2_prev = k1, k2
        MX_prev, MY_prev = MX, MY
    return CosSelection(k1=k1, k2=k2, outer_iterations=it, converged=converged)


def cos_fgm_sweep(M, params: CosSelectParams, scales=None, **factor_kw):
    """Run :func:`cos_fgm` over a range of ``lam_scale`` values.

    Keeps the selection with the best ``1 - rel_residual`` from
    :func:`compute_factors`; ties go to the earlier scale. Returns
    ``(selection, lam_scale, rel_approx)``.
    """
    if scales is None:
        scales = np.logspace(-3, 1, 10)
    best = None
    for s in scales:
        p = replace(params, fgm=replace(params.fgm, lam=None, lam_scale=float(s)))
        sel = cos_fgm(M, p)
        approx = 1.0 - compute_factors(M, sel.k1, sel.k2, **factor_kw).rel_residual
        if best is None or approx > best[2]:
            best = (sel, float(s), approx)
    return best


@dataclass
class CharacterizationReport:
    row_residual: float
    col_residual: float
    cos_residual: float
    row_identity_error: float
    col_identity_error: float
    tol: float

    @property
    def row_ok(self) -> bool:
        return self.row_residual <= self.tol

    @property
    def col_ok(self) -> bool:
        return self.col_residual <= self.tol

    @property
    def cos_ok(self) -> bool:
        return self.cos_residual <= self.tol

    @property
    def identity_ok(self) -> bool:
        return max(self.row_identity_error, self.col_identity_error) <= self.tol

    @property
    def all_ok(self) -> bool:
        return self.row_ok and self.col_ok and self.cos_ok


def verify_characterizations(M, sel, tol=1e-8) -> CharacterizationReport:
    """Check the three equivalent descriptions of a co-separable selection.

    With exact NNLS fits ``P1 = argmin ||M - P1 M(k1, :)||`` and
    ``P2 = argmin ||M - M(:, k2) P2||`` this reports the relative residuals
    of the row fit, the column fit and ``M ~ P1 M(k1, k2) P2``, together
    with the max deviation of ``P1(k1, :)`` and ``P2(:, k2)`` from the
    identity. ``sel`` is a :class:`CosSelection` or a ``(k1, k2)`` pair.
    The identity deviation is only meaningful when the fits are unique,
    i.e. when ``M(k1, :)`` has full row rank and ``M(:, k2)`` full column
    rank.
    """
    A = as_matrix(M, nonnegative=True)
    k1, k2 = (sel.k1, sel.k2) if isinstance(sel, CosSelection) else sel
    k1 = index_set(k1, A.shape[0])
    k2 = index_set(k2, A.shape[1])
    normM = frobenius_norm(A)

    def rel(R):
        return frobenius_norm(R) / normM if normM > 0 else 0.0

    P1 = nnls_active_set(A.T, submatrix(A, k1, None).T).T
    P2 = nnls_active_set(A, submatrix(A, None, k2))
    S = submatrix(A, k1, k2)
    return CharacterizationReport(
        row_residual=rel(A - P1 @ A[k1, :]),
        col_residual=rel(A - A[:, k2] @ P2),
        cos_residual=rel(A - P1 @ S @ P2),
        row_identity_error=float(np.abs(P1[k1, :] - np.eye(k1.size)).max()),
        col_identity_error=float(np.abs(P2[:, k2] - np.eye(k2.size)).max()),
        tol=tol,
    )
