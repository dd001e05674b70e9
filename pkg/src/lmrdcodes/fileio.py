"""Plain-text code files.

Layout::

    CDC q=2 v=6 k=3 d=4 count=71

    100000
    010000
    001000

    100000
    ...
    # provenance lines

The header is followed by one block per codeword: ``k`` lines of ``v``
symbols in canonical RREF, blocks separated by blank lines.  Symbols are the
integer encodings of field elements written as ``0-9`` then ``a-z``.
Comment lines start with ``#``.  Files ending in ``.gz`` are read and
written through gzip.
"""

from __future__ import annotations

import gzip
import io
import logging
import re
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .cdc import Cdc
from .errors import CodeFileError
from .gf import field_new
from .linalg import Subspace, rref_array

log = logging.getLogger(__name__)

SYMBOLS = "0123456789abcdefghijklmnopqrstuvwxyz"
_HEADER = re.compile(r"^CDC\s+q=(\d+)\s+v=(\d+)\s+k=(\d+)\s+d=(\d+)\s+count=(\d+)\s*$")


def _open(path: str | Path, mode: str) -> IO[str]:
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode + "t", encoding="ascii")
    return open(path, mode, encoding="ascii")


def format_header(q: int, v: int, k: int, d: int, count: int) -> str:
    return f"CDC q={q} v={v} k={k} d={d} count={count}"


def dumps(c: Cdc) -> str:
    buf = io.StringIO()
    dump(c, buf)
    return buf.getvalue()


def dump(c: Cdc, out: IO[str]) -> None:
    q = c.field.q
    if q > len(SYMBOLS):
        raise ValueError(f"no single-character symbols for q={q}")
    out.write(format_header(q, c.v, c.k, c.claimed_d, len(c)) + "\n")
    table = np.array(list(SYMBOLS[:q]))
    for u in c:
        out.write("\n")
        for row in u.basis:
            out.write("".join(table[row]) + "\n")
    if c.provenance:
        out.write("\n")
        for line in c.provenance:
            for part in str(line).splitlines() or [""]:
                out.write(f"# {part}\n")


def write_code(c: Cdc, path: str | Path) -> None:
    with _open(path, "w") as fh:
        dump(c, fh)


def _parse_row(line: str, q: int, v: int, lineno: int) -> list[int]:
    if len(line) != v:
        raise CodeFileError(f"expected {v} symbols, found {len(line)}", lineno)
    out = []
    for ch in line:
        val = SYMBOLS.find(ch.lower())
        if val < 0 or val >= q:
            raise CodeFileError(f"symbol {ch!r} is not an element of GF({q})", lineno)
        out.append(val)
    return out


def loads(text: str) -> Cdc:
    return _parse(text.splitlines())


def read_code(path: str | Path) -> Cdc:
    with _open(path, "r") as fh:
        return _parse(fh.read().splitlines())


def _parse(lines: Iterable[str]) -> Cdc:
    lines = list(lines)
    header_at = next((i for i, ln in enumerate(lines) if ln.strip() and not ln.lstrip().startswith("#")), None)
    if header_at is None:
        raise CodeFileError("missing header", 1)
    m = _HEADER.match(lines[header_at].strip())
    if not m:
        raise CodeFileError("header must read 'CDC q=<q> v=<v> k=<k> d=<d> count=<n>'", header_at + 1)
    q, v, k, d, count = (int(x) for x in m.groups())
    try:
        field = field_new(q)
    except ValueError as exc:
        raise CodeFileError(str(exc), header_at + 1) from None
    provenance: list[str] = []
    c = Cdc(field, v, k, d)
    blocks = 0
    block: list[list[int]] = []
    start = 0

    def finish() -> None:
        nonlocal blocks, block
        if not block:
            return
        if len(block) != k:
            raise CodeFileError(f"codeword block has {len(block)} rows, expected {k}", start)
        arr = np.array(block, dtype=np.uint8).reshape(k, v)
        red, piv = rref_array(field, arr)
        if len(piv) != k or not np.array_equal(red[:k], arr):
            raise CodeFileError("codeword block is not a rank-k matrix in reduced row echelon form", start)
        blocks += 1
        if not c.add(Subspace(field, v, arr)):
            log.warning("line %d: duplicate codeword ignored", start)
        block = []

    for i in range(header_at + 1, len(lines)):
        raw = lines[i].strip()
        lineno = i + 1
        if raw.startswith("#"):
            finish()
            provenance.append(raw[1:].strip())
            continue
        if not raw:
            finish()
            continue
        if provenance:
            raise CodeFileError("codeword rows after provenance comments", lineno)
        if not block:
            start = lineno
        block.append(_parse_row(raw, q, v, lineno))
    finish()
    if blocks != count or len(c) != count:
        dup = blocks - len(c)
        extra = f" ({dup} duplicates)" if dup else ""
        raise CodeFileError(f"header count {count} but {len(c)} distinct codewords{extra}", header_at + 1)
    c.provenance = provenance
    return c


def read_matrix(path: str | Path, q: int) -> np.ndarray:
    """A square matrix as rows of symbols, blank and ``#`` lines ignored."""
    rows = []
    with _open(path, "r") as fh:
        for i, line in enumerate(fh, 1):
            raw = line.strip().replace(" ", "")
            if not raw or raw.startswith("#"):
                continue
            rows.append(_parse_row(raw, q, len(raw), i))
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise CodeFileError("matrix rows have unequal lengths", 1)
    return np.array(rows, dtype=np.uint8)


def convert_table_format(path: str | Path) -> Cdc:
    """Import from the downloadable format of the online code tables.

    That format is not documented in the sources this package follows, so
    the converter is a stub.
    """
    raise NotImplementedError("the online table download format is not documented; convert to the CDC text format")
