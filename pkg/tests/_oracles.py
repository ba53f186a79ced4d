"""Independent reference computations shared by the tests."""

import itertools

import numpy as np


def grid_projection(z, t, w, step=1e-4):
    """Projection onto the Omega row slice by scanning the diagonal value.

    For each grid value x the best off-diagonals are the clamps of z; the
    x with the smallest squared distance wins.
    """
    z = np.asarray(z, dtype=float)
    c = np.asarray(w, dtype=float) / w[t]
    xs = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    caps = np.minimum(1.0, np.outer(xs, c))
    Y = np.minimum(np.maximum(z, 0.0)[None, :], caps)
    Y[:, t] = xs
    d = np.sum((Y - z[None, :]) ** 2, axis=1)
    return Y[int(np.argmin(d))]


def brute_force_accuracy(Q, Qstar):
    n, r = Q.shape
    best = min(np.linalg.norm(Q[:, list(p)] - Qstar)
               for p in itertools.permutations(range(r)))
    return 1.0 - np.sqrt(best / (r * n))


def random_assignment(rng, n, r):
    Q = np.zeros((n, r))
    Q[np.arange(n), rng.integers(0, r, size=n)] = 1.0
    return Q


def central_difference_grad(f, Y, h=1e-6):
    G = np.zeros_like(Y)
    for idx in np.ndindex(Y.shape):
        E = np.zeros_like(Y)
        E[idx] = h
        G[idx] = (f(Y + E) - f(Y - E)) / (2 * h)
    return G
