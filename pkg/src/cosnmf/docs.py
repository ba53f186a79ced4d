"""Document-word matrix preparation: vocabulary trimming and word labels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidWeightError
from .matrix import as_matrix


@dataclass
class LabeledCorpus:
    M: np.ndarray  # documents x words
    doc_labels: np.ndarray
    word_labels: np.ndarray
    r: int
    doc_index: np.ndarray  # rows of the input that were kept
    word_index: np.ndarray  # columns of the input that were kept


def select_top_words(M0, doc_labels, k: int) -> LabeledCorpus:
    """Keep the ``k`` heaviest words and label each word by a document.

    Words are ranked by total weight over all documents (ties to the lower
    index) and returned in their original order. Documents left empty are
    dropped. A word takes the label of the document in which it has the
    largest share of that document's total weight, ties to the lower
    document index.
    """
    A = as_matrix(M0, nonnegative=True)
    labels = np.asarray(doc_labels, dtype=np.intp).reshape(-1)
    if labels.size != A.shape[0]:
        raise DimensionError(f"{labels.size} labels for {A.shape[0]} documents")
    if not 1 <= k <= A.shape[1]:
        raise DimensionError(f"k must be in [1, {A.shape[1]}], got {k}")
    order = np.argsort(-A.sum(axis=0), kind="stable")
    words = np.sort(order[:k])
    B = A[:, words]
    docs = np.flatnonzero(B.sum(axis=1) > 0)
    B = B[docs]
    labels = labels[docs]
    share = B / B.sum(axis=1, keepdims=True)
    word_labels = labels[np.argmax(share, axis=0)]
    r = int(labels.max()) + 1 if labels.size else 0
    return LabeledCorpus(M=B, doc_labels=labels, word_labels=word_labels, r=r,
                         doc_index=docs, word_index=words)


def scale_by_cluster_size(M, weights, axis=1) -> np.ndarray:
    """Multiply each column (``axis=1``) or row (``axis=0``) by ``sqrt(weight)``."""
    A = as_matrix(M)
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.size != A.shape[axis]:
        raise DimensionError(f"{w.size} weights for dimension of size {A.shape[axis]}")
    if np.any(w <= 0):
        raise InvalidWeightError("cluster sizes must be positive")
    s = np.sqrt(w)
    return A * s[None, :] if axis == 1 else A * s[:, None]
