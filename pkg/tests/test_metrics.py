import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _oracles import brute_force_accuracy, random_assignment
from cosnmf.factors import compute_factors
from cosnmf.metrics import (clustering_accuracy, cur_residual, hard_cluster, index_accuracy,
                            relative_approx_cosep, relative_approx_generic)
from cosnmf.synth import gen_cosep


def test_index_accuracy_examples():
    assert index_accuracy([1, 2], [4], [1, 2], [4]) == 1.0
    assert index_accuracy([0], [0], [1], [1]) == 0.0
    assert index_accuracy([1, 3], [4], [1, 2], [4]) == pytest.approx(2 / 3)
    assert index_accuracy([3, 1], [4], [2, 1], [4]) == pytest.approx(2 / 3)


def test_relative_approx_cosep():
    inst = gen_cosep(60, 50, 5, 3, 0.0, seed=0)
    assert relative_approx_cosep(inst.M, inst.k1_star, inst.k2_star,
                                 solver="active_set") >= 1 - 1e-6
    M = np.random.default_rng(1).random((4, 4))
    assert relative_approx_cosep(M, range(4), range(4)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(2))
def test_relative_approx_low_noise(seed):
    inst = gen_cosep(100, 100, 10, 3, 2.6e-3, seed=seed)
    assert relative_approx_cosep(inst.M, inst.k1_star, inst.k2_star) >= 0.99


def test_relative_approx_generic():
    M = np.random.default_rng(2).random((3, 4))
    assert relative_approx_generic(M, M) == 1.0
    assert relative_approx_generic(M, 0 * M) == 0.0
    assert relative_approx_generic(M, 2 * M) == pytest.approx(0.0)
    assert relative_approx_generic(M, 4 * M) == pytest.approx(-2.0)


def test_hard_cluster():
    np.testing.assert_array_equal(hard_cluster(np.eye(3)), np.eye(3))
    np.testing.assert_array_equal(hard_cluster([[0.2, 0.2]]), [[1, 0]])
    np.testing.assert_array_equal(hard_cluster([[0.0, 0.0, 0.0]]), [[1, 0, 0]])


def test_clustering_accuracy_examples():
    Q = np.eye(2)
    assert clustering_accuracy(Q, Q) == 1.0
    assert clustering_accuracy(Q[:, ::-1], Q) == 1.0
    a = clustering_accuracy(np.array([[1.0, 0], [1, 0]]), np.eye(2))
    assert a == pytest.approx(1 - np.sqrt(np.sqrt(2) / 4))
    assert a == pytest.approx(0.4054, abs=1e-4)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 25))
def test_assignment_equals_brute_force(seed, r, n):
    rng = np.random.default_rng(seed)
    Q, Qs = random_assignment(rng, n, r), random_assignment(rng, n, r)
    assert clustering_accuracy(Q, Qs) == brute_force_accuracy(Q, Qs)
    assert clustering_accuracy(Q, Q) == 1.0
    p = rng.permutation(r)
    assert clustering_accuracy(Q[:, p], Qs[:, p]) == pytest.approx(clustering_accuracy(Q, Qs),
                                                                   abs=1e-15)


def test_cur_residual():
    inst = gen_cosep(60, 50, 6, 3, 0.0, seed=3)
    cur = cur_residual(inst.M, inst.k1_star, inst.k2_star)
    assert cur <= 1e-8
    f = compute_factors(inst.M, inst.k1_star, inst.k2_star)
    assert cur <= f.rel_residual + 1e-8
    S = np.random.default_rng(4).random((4, 3))
    assert cur_residual(S, range(4), range(3)) <= 1e-10
    M = np.random.default_rng(5).random((8, 7))
    assert cur_residual(M, [0, 1], [2, 3]) > 1e-3
