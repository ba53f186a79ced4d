"""Planted co-separable test matrices."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidInputError
from .matrix import frobenius_norm, sinkhorn_balance
from .mmio import read_mtx, write_mtx


@dataclass
class SyntheticInstance:
    """A generated matrix with its planted row and column sets.

    ``clean`` is the balanced noiseless matrix before permutation; row ``i``
    of ``M`` comes from row ``row_perm[i]`` of ``clean`` (likewise columns).
    ``noise_norm`` is ``||N||_F`` before truncation at zero.
    """

    M: np.ndarray
    k1_star: np.ndarray
    k2_star: np.ndarray
    epsilon: float
    seed: int
    clean: np.ndarray
    row_perm: np.ndarray
    col_perm: np.ndarray
    noise_norm: float

    @property
    def r1(self) -> int:
        return int(self.k1_star.size)

    @property
    def r2(self) -> int:
        return int(self.k2_star.size)

    def sidecar(self) -> dict:
        return {
            "m": int(self.M.shape[0]),
            "n": int(self.M.shape[1]),
            "r1": self.r1,
            "r2": self.r2,
            "epsilon": float(self.epsilon),
            "seed": int(self.seed),
            "k1_star": self.k1_star.tolist(),
            "k2_star": self.k2_star.tolist(),
        }


def gen_cosep(m: int, n: int, r1: int, r2: int, epsilon: float, seed: int) -> SyntheticInstance:
    """Draw a balanced, noisy, permuted co-(r1, r2)-separable matrix.

    ``S``, ``W``, ``H`` are uniform on [0, 1] and assembled as
    ``[[S, S H], [W S, W S H]]``, which is then Sinkhorn balanced. Gaussian
    noise scaled to ``||N||_F = epsilon * ||Ms||_F`` is added, negatives are
    truncated, and rows and columns are randomly permuted.

    The seed is split into three independent streams (blocks, noise,
    permutations) with ``numpy.random.SeedSequence.spawn``, so instances
    sharing a seed share the planted structure across noise levels.
    """
    if not (1 <= r1 < m and 1 <= r2 < n):
        raise DimensionError(f"need 1 <= r1 < m and 1 <= r2 < n, got {(m, n, r1, r2)}")
    if not epsilon >= 0:
        raise InvalidInputError(f"epsilon must be >= 0, got {epsilon}")
    blocks, noise, perms = (np.random.Generator(np.random.PCG64(s))
                            for s in np.random.SeedSequence(seed).spawn(3))
    S = blocks.random((r1, r2))
    W = blocks.random((m - r1, r1))
    H = blocks.random((r2, n - r2))
    WS = W @ S
    B = np.block([[S, S @ H], [WS, WS @ H]])
    d_r, d_c = sinkhorn_balance(B)
    Ms = d_r[:, None] * B * d_c[None, :]

    N = noise.standard_normal((m, n))
    if epsilon > 0:
        N *= epsilon * frobenius_norm(Ms) / frobenius_norm(N)
        X = np.maximum(0.0, Ms + N)
    else:
        N[:] = 0.0
        X = Ms
    row_perm = perms.permutation(m)
    col_perm = perms.permutation(n)
    M = X[np.ix_(row_perm, col_perm)]
    return SyntheticInstance(
        M=M,
        k1_star=np.flatnonzero(row_perm < r1),
        k2_star=np.flatnonzero(col_perm < r2),
        epsilon=float(epsilon),
        seed=int(seed),
        clean=Ms,
        row_perm=row_perm,
        col_perm=col_perm,
        noise_norm=frobenius_norm(N),
    )


def noise_grid(lo=-7.0, hi=-1.0, num=20) -> np.ndarray:
    """Log-spaced noise levels ``10**(lo + (hi - lo) k / (num - 1))``."""
    return np.logspace(lo, hi, num)


def save_instance(inst: SyntheticInstance, directory, stem="instance"):
    """Write ``<stem>.mtx`` and ``<stem>.json``; returns both paths."""
    os.makedirs(directory, exist_ok=True)
    mtx = os.path.join(directory, f"{stem}.mtx")
    side = os.path.join(directory, f"{stem}.json")
    write_mtx(mtx, inst.M)
    with open(side, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(inst.sidecar(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return mtx, side


def load_sidecar(mtx_path):
    """Ground truth next to a ``.mtx`` file, or ``None`` when absent."""
    side = os.path.splitext(os.fspath(mtx_path))[0] + ".json"
    if not os.path.exists(side):
        return None
    with open(side, encoding="utf-8") as fh:
        return json.load(fh)


def load_instance(mtx_path):
    """Read a matrix and its sidecar (``None`` if missing)."""
    return read_mtx(mtx_path), load_sidecar(mtx_path)
