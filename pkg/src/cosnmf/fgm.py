"""Fast gradient method for separable NMF with a self-dictionary.

Solves

    min_{Y in Omega}  F(Y) = 1/2 ||M - M Y||_F^2 + lam * trace(Y)

where ``Omega = {0 <= Y <= 1, w_t Y(t, l) <= w_l Y(t, t)}`` and
``w_t = ||M(:, t)||_1``. The nonzero rows of ``Y`` (equivalently its
largest diagonal entries) mark the columns of ``M`` that represent the
others.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import DegenerateError, InvalidInputError, InvalidWeightError
from .matrix import as_matrix, spectral_norm_sq
from .spa import spa

BISECTION_STEPS = 60


@dataclass(frozen=True)
class FgmParams:
    """Solver settings.

    ``lam=None`` selects ``lam_scale * sigma_max(M)^2 / n`` for each input.
    """

    lam: float | None = None
    max_iter: int = 1000
    alpha0: float = 0.05
    restart: bool = True
    lam_scale: float = 1e-2

    def __post_init__(self):
        if self.lam is not None and not self.lam > 0:
            raise InvalidInputError(f"lam must be positive, got {self.lam}")
        if not 0 < self.alpha0 < 1:
            raise InvalidInputError(f"alpha0 must be in (0, 1), got {self.alpha0}")
        if not self.lam_scale > 0:
            raise InvalidInputError("lam_scale must be positive")
        if self.max_iter < 1:
            raise InvalidInputError("max_iter must be >= 1")


@dataclass
class FgmOutput:
    Y: np.ndarray
    objective_trace: list = field(default_factory=list)
    iterations_run: int = 0
    lam: float = 0.0


def omega_weights(M) -> np.ndarray:
    """Column l1 norms of ``M``; zero columns are rejected."""
    A = as_matrix(M, nonnegative=True)
    w = A.sum(axis=0)
    if np.any(w <= 0):
        bad = np.flatnonzero(w <= 0).tolist()
        raise InvalidInputError(f"zero columns are not allowed: {bad}")
    return w


def default_lambda(M, scale=1e-2) -> float:
    A = as_matrix(M)
    return scale * spectral_norm_sq(A) / A.shape[1]


def project_omega_row(z, diag_pos: int, w) -> np.ndarray:
    """Euclidean projection of one row of ``Y`` onto its slice of Omega.

    For a fixed diagonal value ``x`` every off-diagonal entry is
    ``clip(z_l, 0, min(1, w_l / w_t * x))``; the remaining 1-D problem in
    ``x`` is convex with a monotone derivative and is solved by bisection
    on ``[0, 1]``.
    """
    z = np.asarray(z, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if np.any(w <= 0):
        raise InvalidWeightError("Omega weights must be positive")
    t = diag_pos
    c = w / w[t]
    mask = np.ones(z.size, dtype=bool)
    mask[t] = False
    mask &= z > 0
    zc, cc = z[mask], c[mask]
    ub = np.minimum(zc, 1.0)

    def half_slope(x):
        act = cc * x < ub
        return x - z[t] + np.sum(cc[act] * (cc[act] * x - zc[act]))

    if half_slope(0.0) >= 0.0:
        x = 0.0
    elif half_slope(1.0) <= 0.0:
        x = 1.0
    else:
        lo, hi = 0.0, 1.0
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            if half_slope(mid) > 0.0:
                hi = mid
            else:
                lo = mid
        x = 0.5 * (lo + hi)
    y = np.minimum(np.maximum(z, 0.0), np.minimum(1.0, c * x))
    y[t] = x
    return y


@numba.njit(cache=True, nogil=True)
def _swap3(a, b, c, i, j):
    a[i], a[j] = a[j], a[i]
    b[i], b[j] = b[j], b[i]
    c[i], c[j] = c[j], c[i]


@numba.njit(cache=True, nogil=True)
def _project_rows(Z, w):
    # Row t is projected with diagonal position t. The slope of the 1-D
    # problem in the diagonal value x is a*x - b, where (a, b) sum over the
    # off-diagonals whose cap is active, i.e. whose breakpoint
    # min(z_l, 1) / c_l exceeds x. The root is located by a selection search
    # over the breakpoints (expected linear time), not a full sort.
    n = Z.shape[0]
    Y = np.empty_like(Z)
    c = np.empty(n)
    bp = np.empty(n)
    cz = np.empty(n)
    c2 = np.empty(n)
    for t in range(n):
        inv = 1.0 / w[t]
        k = 0
        for l in range(n):
            cl = w[l] * inv
            c[l] = cl
            zl = Z[t, l]
            if l != t and zl > 0.0:
                bp[k] = (zl if zl < 1.0 else 1.0) / cl
                cz[k] = cl * zl
                c2[k] = cl * cl
                k += 1
        # candidates in [lo, k) are unresolved; a_hi, b_hi accumulate those
        # known to be active on the whole bracket (lower, upper)
        a_hi = 1.0
        b_hi = Z[t, t]
        lower = 0.0
        upper = np.inf
        lo = 0
        hi = k
        b_all = b_hi
        for q in range(k):
            b_all += cz[q]
        if b_all <= 0.0:
            x = 0.0
        else:
            while hi > lo:
                p = bp[(lo + hi) // 2]
                # three-way partition of [lo, hi): bp < p | bp == p | bp > p
                i = lo
                m = lo
                j = hi
                while m < j:
                    if bp[m] < p:
                        _swap3(bp, cz, c2, i, m)
                        i += 1
                        m += 1
                    elif bp[m] > p:
                        j -= 1
                        _swap3(bp, cz, c2, m, j)
                    else:
                        m += 1
                a_p = a_hi
                b_p = b_hi
                for q in range(j, hi):
                    a_p += c2[q]
                    b_p += cz[q]
                if a_p * p - b_p >= 0.0:
                    # root at or below p; everything from the pivot up is
                    # active below p
                    for q in range(i, j):
                        a_p += c2[q]
                        b_p += cz[q]
                    a_hi = a_p
                    b_hi = b_p
                    upper = p
                    hi = i
                else:
                    lower = p
                    lo = j
            x = b_hi / a_hi
            if x < lower:
                x = lower
            if x > upper:
                x = upper
            if x > 1.0:
                x = 1.0
        for l in range(n):
            v = Z[t, l]
            if v < 0.0:
                v = 0.0
            cap = c[l] * x
            if cap > 1.0:
                cap = 1.0
            Y[t, l] = v if v < cap else cap
        Y[t, t] = x
    return Y


def project_omega(Z, w) -> np.ndarray:
    """Project every row of the square matrix ``Z`` onto Omega."""
    Z = np.ascontiguousarray(Z, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if np.any(w <= 0):
        raise InvalidWeightError("Omega weights must be positive")
    return _project_rows(Z, w)


def objective(M, Y, lam) -> float:
    M = np.asarray(M, dtype=np.float64)
    R = M - M @ Y
    return 0.5 * float(np.sum(R * R)) + lam * float(np.trace(Y))


def gradient(M, Y, lam) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    G = M.T @ M
    return G @ Y - G + lam * np.eye(G.shape[0])


def in_omega(Y, w, slack=1e-9) -> bool:
    """Check both bound families of Omega with additive ``slack``."""
    Y = np.asarray(Y)
    if Y.min() < -slack or Y.max() > 1 + slack:
        return False
    d = np.diag(Y)
    return bool(np.all(w[:, None] * Y <= w[None, :] * d[:, None] + slack * w.max()))


def _next_alpha(a):
    return 0.5 * (np.sqrt(a ** 4 + 4.0 * a * a) - a * a)


def fgm_snmf(M, params: FgmParams | None = None, callback=None) -> FgmOutput:
    """Nesterov-accelerated projected gradient on ``F`` over Omega.

    Starts from ``Y = 0``. The returned ``Y`` and each entry of
    ``objective_trace`` refer to the projected (feasible) iterate; the
    extrapolated point only feeds the next gradient step. With
    ``params.restart`` an objective increase resets the momentum
    (``alpha = alpha0`` and no extrapolation on that step).

    ``callback(k, Y)`` is called with every recorded iterate when given.
    """
    params = params or FgmParams()
    A = as_matrix(M, nonnegative=True)
    w = omega_weights(A)
    n = A.shape[1]
    G = A.T @ A
    L = spectral_norm_sq(A)
    lam = params.lam if params.lam is not None else params.lam_scale * L / n
    half_norm2 = 0.5 * float(np.sum(A * A))
    grad_shift = lam * np.eye(n) - G

    Y = np.zeros((n, n))
    GY = np.zeros((n, n))
    Yp, GYp = Y, GY
    Fp = half_norm2
    alpha = params.alpha0
    trace = []
    for k in range(params.max_iter):
        Yn = _project_rows(Y - (GY + grad_shift) / L, w)
        GYn = G @ Yn
        F = half_norm2 - float(np.vdot(G, Yn)) + 0.5 * float(np.vdot(Yn, GYn)) \
            + lam * float(np.trace(Yn))
        if params.restart and F > Fp:
            # keep the step but drop the momentum
            alpha = params.alpha0
            beta = 0.0
        else:
            alpha_next = _next_alpha(alpha)
            beta = alpha * (1.0 - alpha) / (alpha * alpha + alpha_next)
            alpha = alpha_next
        Y = Yn + beta * (Yn - Yp)
        GY = GYn + beta * (GYn - GYp)
        Yp, GYp, Fp = Yn, GYn, F
        trace.append(F)
        if callback is not None:
            callback(k, Yn)
    return FgmOutput(Y=Yp, objective_trace=trace, iterations_run=len(trace), lam=lam)


def postprocess_diag(Y, r: int) -> np.ndarray:
    """Indices of the ``r`` largest diagonal entries (lowest index on ties), sorted."""
    d = np.diag(np.asarray(Y))
    order = np.argsort(-d, kind="stable")
    return np.sort(order[:r])


def postprocess_spa(Y, r: int) -> np.ndarray:
    """Order the columns by SPA on ``Y.T`` and keep the first ``r``, sorted."""
    res = spa(np.asarray(Y).T, r)
    if res.selected.size < r:
        raise DegenerateError(
            f"SPA on Y^T stopped after {res.selected.size} of {r} indices",
            partial=np.sort(res.selected))
    return np.sort(res.selected)
