import numpy as np
import pytest

from cosnmf.docs import scale_by_cluster_size, select_top_words
from cosnmf.errors import DimensionError, InvalidWeightError


def test_no_op_trim():
    M0 = np.random.default_rng(0).random((4, 6)) + 0.1
    c = select_top_words(M0, [0, 1, 1, 0], 6)
    np.testing.assert_array_equal(c.M, M0)
    np.testing.assert_array_equal(c.doc_labels, [0, 1, 1, 0])
    assert c.word_labels.shape == (6,) and c.r == 2


def test_forced_word_label():
    M0 = np.array([[1.0, 1.0, 0.0], [2.0, 0.0, 0.0], [1.0, 0.0, 3.0]])
    c = select_top_words(M0, [2, 0, 1], 3)
    assert c.word_labels[1] == 2
    assert c.word_labels[2] == 1


def test_hand_computed_labels():
    M0 = np.array([[2.0, 1.0, 1.0, 0.0],
                   [1.0, 3.0, 0.0, 0.0],
                   [1.0, 0.0, 1.0, 2.0]])
    # row shares: doc0 (.5, .25, .25, 0), doc1 (.25, .75, 0, 0), doc2 (.25, 0, .25, .5)
    c = select_top_words(M0, [0, 1, 2], 4)
    np.testing.assert_array_equal(c.word_labels, [0, 1, 0, 2])


def test_trim_and_drop_empty_documents():
    M0 = np.array([[5.0, 0.0, 0.0],
                   [0.0, 0.0, 1.0],
                   [3.0, 4.0, 0.0]])
    c = select_top_words(M0, [0, 1, 0], 2)
    np.testing.assert_array_equal(c.word_index, [0, 1])
    np.testing.assert_array_equal(c.doc_index, [0, 2])
    assert c.M.shape == (2, 2) and np.all(c.M.sum(axis=1) > 0) and np.all(c.M.sum(axis=0) > 0)
    assert set(c.word_labels.tolist()) <= set(c.doc_labels.tolist())


def test_ties_by_lowest_index():
    M0 = np.ones((2, 4))
    c = select_top_words(M0, [1, 0], 2)
    np.testing.assert_array_equal(c.word_index, [0, 1])
    np.testing.assert_array_equal(c.word_labels, [1, 1])


def test_k_too_large():
    with pytest.raises(DimensionError):
        select_top_words(np.ones((2, 3)), [0, 1], 4)


def test_scale_by_cluster_size():
    M = np.random.default_rng(1).random((3, 3))
    np.testing.assert_array_equal(scale_by_cluster_size(M, [1, 1, 1]), M)
    np.testing.assert_allclose(scale_by_cluster_size(M, [1, 4, 1])[:, 1], 2 * M[:, 1])
    np.testing.assert_allclose(scale_by_cluster_size(M, [1, 4, 9]), M * [1, 2, 3])
    np.testing.assert_allclose(scale_by_cluster_size(M, [1, 4, 9], axis=0),
                               M * np.array([[1], [2], [3]]))
    with pytest.raises(InvalidWeightError):
        scale_by_cluster_size(M, [1, 0, 1])
    with pytest.raises(DimensionError):
        scale_by_cluster_size(M, [1, 1])
