import gzip

import numpy as np
import pytest

from lmrdcodes.cdc import Cdc, family_6l, standard_lmrd
from lmrdcodes.errors import CodeFileError
from lmrdcodes.fileio import convert_table_format, dumps, loads, read_code, read_matrix, write_code
from lmrdcodes.gf import field_new
from lmrdcodes.linalg import subspace_from_rows


@pytest.mark.parametrize("q", [2, 3, 4])
def test_roundtrip(tmp_path, q):
    c = standard_lmrd(field_new(q), 6, 4, 3) if q < 4 else standard_lmrd(field_new(q), 4, 4, 2)
    path = tmp_path / "c.cdc"
    write_code(c, path)
    back = read_code(path)
    assert [u.key for u in back] == [u.key for u in c]
    assert (back.field.q, back.v, back.k, back.claimed_d) == (q, c.v, c.k, c.claimed_d)
    assert back.provenance == c.provenance


def test_gzip_roundtrip(tmp_path):
    c = family_6l(2, 1)
    path = tmp_path / "c.cdc.gz"
    write_code(c, path)
    with gzip.open(path, "rt") as fh:
        assert fh.readline().startswith("CDC q=2 v=6 k=3 d=4 count=71")
    assert len(read_code(path)) == 71


def test_symbols_beyond_nine():
    f = field_new(16)
    c = Cdc(f, 2, 1, 2, [subspace_from_rows(f, 2, [[1, 15]])])
    text = dumps(c)
    assert "1f" in text
    assert loads(text.replace("1f", "1F")).codewords()[0].basis.tolist() == [[1, 15]]


def test_header_errors():
    with pytest.raises(CodeFileError, match="header"):
        loads("CDC q=2 v=4\n")
    with pytest.raises(CodeFileError, match="missing header"):
        loads("# only a comment\n")
    with pytest.raises(CodeFileError):
        loads("CDC q=6 v=2 k=1 d=2 count=0\n")


def test_block_errors():
    with pytest.raises(CodeFileError) as exc:
        loads("CDC q=2 v=4 k=2 d=2 count=1\n\n1000\n0120\n")
    assert exc.value.lineno == 4
    with pytest.raises(CodeFileError, match="reduced row echelon"):
        loads("CDC q=2 v=4 k=2 d=2 count=1\n\n1100\n0100\n")
    with pytest.raises(CodeFileError, match="rows"):
        loads("CDC q=2 v=4 k=2 d=2 count=1\n\n1000\n")
    with pytest.raises(CodeFileError, match="symbols"):
        loads("CDC q=2 v=4 k=1 d=2 count=1\n\n100\n")


def test_count_and_duplicates(caplog):
    block = "\n1000\n0100\n"
    with pytest.raises(CodeFileError, match="duplicates"):
        loads("CDC q=2 v=4 k=2 d=2 count=2\n" + block + block)
    assert "duplicate" in caplog.text
    with pytest.raises(CodeFileError, match="count"):
        loads("CDC q=2 v=4 k=2 d=2 count=3\n" + block)


def test_rows_after_comments_rejected():
    with pytest.raises(CodeFileError, match="after provenance"):
        loads("CDC q=2 v=4 k=1 d=2 count=2\n\n1000\n# note\n0100\n")


def test_read_matrix(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# generator\n01\n10\n")
    assert np.array_equal(read_matrix(p, 2), [[0, 1], [1, 0]])
    p.write_text("01\n1\n")
    with pytest.raises(CodeFileError):
        read_matrix(p, 2)


def test_table_converter_is_a_stub(tmp_path):
    with pytest.raises(NotImplementedError):
        convert_table_format(tmp_path / "x")
