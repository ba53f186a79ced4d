import numpy as np
import pytest

from cosnmf.errors import ParseError
from cosnmf.mmio import read_labels, read_mtx, write_labels, write_mtx


def _write(tmp_path, text, name="m.mtx"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_roundtrip_exact(tmp_path):
    M = np.random.default_rng(0).random((4, 3)) * 1e-3
    write_mtx(tmp_path / "a.mtx", M, comment="two\nlines")
    np.testing.assert_array_equal(read_mtx(tmp_path / "a.mtx"), M)


def test_coordinate_duplicates_summed(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix coordinate real general\n% c\n2 3 3\n"
                         "1 1 1.5\n2 3 2\n1 1 0.5\n")
    np.testing.assert_array_equal(read_mtx(p), [[2.0, 0, 0], [0, 0, 2.0]])


def test_coordinate_pattern_and_symmetric(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix coordinate pattern symmetric\n2 2 2\n1 1\n2 1\n")
    np.testing.assert_array_equal(read_mtx(p), [[1, 1], [1, 0]])


def test_array_integer(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix array integer general\n2 2\n1\n2\n3\n4\n")
    np.testing.assert_array_equal(read_mtx(p), [[1, 3], [2, 4]])


def test_array_symmetric(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n")
    np.testing.assert_array_equal(read_mtx(p), [[1, 2], [2, 3]])


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1\n", 1),
    ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 x 2.0\n", 4),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", 3),
    ("%%MatrixMarket matrix array real general\n2 two\n", 2),
    ("%%MatrixMarket matrix array real general\n1 2\n1.0\n", 3),
])
def test_parse_errors_carry_line(tmp_path, text, line):
    p = _write(tmp_path, text)
    with pytest.raises(ParseError) as info:
        read_mtx(p)
    assert info.value.line == line
    assert f":{line}:" in str(info.value)


def test_labels_roundtrip(tmp_path):
    write_labels(tmp_path / "l.txt", [0, 2, 1])
    np.testing.assert_array_equal(read_labels(tmp_path / "l.txt"), [0, 2, 1])
    (tmp_path / "bad.txt").write_text("0\nx\n")
    with pytest.raises(ParseError):
        read_labels(tmp_path / "bad.txt")
