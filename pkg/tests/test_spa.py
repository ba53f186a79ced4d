import numpy as np
import pytest
from scipy.optimize import nnls

from cosnmf.errors import DimensionError
from cosnmf.spa import spa, spa_columns, spa_plus, spa_rows


def test_identity_tie_break():
    res = spa(np.eye(3), 2)
    np.testing.assert_array_equal(res.selected, [0, 1])
    np.testing.assert_allclose(res.residual_norms, [1, 1])


def test_hand_projection():
    M = np.array([[1.0, 0.0, 0.5], [0.0, 1.0, 0.5]])
    np.testing.assert_array_equal(spa(M, 2).selected, [0, 1])


def _separable(m=8, r=4, extra=12, seed=0):
    rng = np.random.default_rng(seed)
    W = rng.random((m, r)) + np.eye(m, r) * 2
    H = rng.dirichlet(np.ones(r), size=extra).T * 0.9
    return W @ np.hstack([np.eye(r), H])


def test_planted_separable():
    M = _separable()
    sel = spa(M, 4).selected
    assert set(sel.tolist()) == {0, 1, 2, 3}
    for j in range(M.shape[1]):
        _, res = nnls(M[:, sel], M[:, j])
        assert res < 1e-8


def test_permutation_equivariance():
    M = _separable(seed=1)
    perm = np.random.default_rng(5).permutation(M.shape[1])
    a = set(spa(M, 4).selected.tolist())
    b = set(perm[spa(M[:, perm], 4).selected].tolist())
    assert a == b


def test_selected_residuals_vanish():
    rng = np.random.default_rng(2)
    M = rng.random((6, 9))
    R = M.copy()
    sel = spa(M, 3).selected
    Q, _ = np.linalg.qr(M[:, sel])
    R -= Q @ (Q.T @ M)
    assert np.linalg.norm(R[:, sel]) <= 1e-10 * np.linalg.norm(M)


def test_early_stop_on_low_rank():
    M = np.outer([1.0, 2.0], [1.0, 2.0, 3.0])
    res = spa(M, 3)
    assert res.selected.size == 1
    assert np.all(res.residual_norms >= 0)


def test_range_check():
    with pytest.raises(DimensionError):
        spa(np.eye(3), 4)
    with pytest.raises(DimensionError):
        spa(np.eye(3), 0)


def test_variants():
    M = _separable(seed=3)
    np.testing.assert_array_equal(spa_columns(M, 4), np.sort(spa(M, 4).selected))
    np.testing.assert_array_equal(spa_rows(M.T, 4), spa_columns(M, 4))
    k1, k2 = spa_plus(M, 2, 3)
    np.testing.assert_array_equal(k1, spa_rows(M, 2))
    np.testing.assert_array_equal(k2, spa_columns(M, 3))
