"""MatrixMarket reading and writing, plus the small text formats around it.

Only real-valued ``matrix`` objects are supported. Coordinate files are
accumulated (duplicates summed) into a dense array; arrays are written in
column-major ``array`` format with 17 significant digits so that values
round-trip exactly.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ParseError

_FIELDS = {"real", "integer", "pattern"}
_SYMMETRIES = {"general", "symmetric"}


def read_mtx(path) -> np.ndarray:
    """Read a MatrixMarket file into a dense float64 array."""
    path = os.fspath(path)
    with open(path, encoding="ascii", errors="replace") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", path, 1)
    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket header", path, 1)
    obj, fmt, field, sym = (h.lower() for h in header[1:])
    if obj != "matrix" or fmt not in ("coordinate", "array"):
        raise ParseError(f"unsupported object/format {obj} {fmt}", path, 1)
    if field not in _FIELDS or (fmt == "array" and field == "pattern"):
        raise ParseError(f"unsupported field {field}", path, 1)
    if sym not in _SYMMETRIES:
        raise ParseError(f"unsupported symmetry {sym}", path, 1)

    body = [(i + 1, ln) for i, ln in enumerate(lines[1:], start=1)
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError("missing size line", path, len(lines))
    size_no, size_line = body[0]
    try:
        dims = [int(tok) for tok in size_line.split()]
    except ValueError:
        raise ParseError(f"bad size line {size_line!r}", path, size_no) from None

    entries = body[1:]
    if fmt == "coordinate":
        if len(dims) != 3:
            raise ParseError("coordinate size line needs rows cols nnz", path, size_no)
        m, n, nnz = dims
        if len(entries) != nnz:
            raise ParseError(f"expected {nnz} entries, found {len(entries)}",
                             path, entries[-1][0] if entries else size_no)
        A = np.zeros((m, n))
        for line_no, ln in entries:
            tok = ln.split()
            try:
                i, j = int(tok[0]), int(tok[1])
                v = 1.0 if field == "pattern" else float(tok[2])
            except (ValueError, IndexError):
                raise ParseError(f"bad entry {ln!r}", path, line_no) from None
            if not (1 <= i <= m and 1 <= j <= n):
                raise ParseError(f"entry ({i}, {j}) outside {m}x{n}", path, line_no)
            A[i - 1, j - 1] += v
            if sym == "symmetric" and i != j:
                A[j - 1, i - 1] += v
        return A

    if len(dims) != 2:
        raise ParseError("array size line needs rows cols", path, size_no)
    m, n = dims
    expected = m * n if sym == "general" else m * (m + 1) // 2
    if len(entries) != expected:
        raise ParseError(f"expected {expected} values, found {len(entries)}",
                         path, entries[-1][0] if entries else size_no)
    vals = []
    for line_no, ln in entries:
        try:
            vals.append(float(ln.split()[0]))
        except ValueError:
            raise ParseError(f"bad value {ln!r}", path, line_no) from None
    if sym == "general":
        return np.array(vals).reshape((n, m)).T.copy()
    A = np.zeros((m, n))
    k = 0
    for j in range(n):
        for i in range(j, m):
            A[i, j] = A[j, i] = vals[k]
            k += 1
    return A


def write_mtx(path, M, comment=None) -> None:
    """Write ``M`` as ``%%MatrixMarket matrix array real general``."""
    A = np.asarray(M, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError("write_mtx expects a 2-D array")
    out = ["%%MatrixMarket matrix array real general"]
    if comment:
        out.extend(f"% {c}" for c in str(comment).splitlines())
    out.append(f"{A.shape[0]} {A.shape[1]}")
    out.extend(f"{v:.17g}" for v in A.T.reshape(-1))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


def read_labels(path) -> np.ndarray:
    """One integer label per non-blank line."""
    path = os.fspath(path)
    labels = []
    with open(path, encoding="ascii") as fh:
        for line_no, ln in enumerate(fh, start=1):
            if not ln.strip():
                continue
            try:
                labels.append(int(ln.strip()))
            except ValueError:
                raise ParseError(f"bad label {ln.strip()!r}", path, line_no) from None
    return np.array(labels, dtype=np.intp)


def write_labels(path, labels) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.writelines(f"{int(v)}\n" for v in labels)
