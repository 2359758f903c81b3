"""Text formats: ``.cplx`` complex lists and ``.mat`` matrices.

``.cplx``: optional ``#`` comment lines, a header ``m n``, then one facet per
line as ascending labels; complexes are separated by a blank line.

``.mat``: a header ``rows cols ring`` with ring ``Z2`` or ``Z``, then one row
per line.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from .complex import ComplexError, PureComplex, full_set, members, vset


class FormatError(ValueError):
    pass


def dumps_complexes(complexes: Iterable[PureComplex], comment: str | None = None) -> str:
    blocks = []
    for K in complexes:
        if K.n == 0 and K.facets:
            raise FormatError("the complex {{}} has no text representation")
        lines = [f"{K.m} {K.n}"]
        lines.extend(" ".join(map(str, members(f))) for f in K.facets)
        blocks.append("\n".join(lines) + "\n")
    head = "".join(f"# {line}\n" for line in comment.splitlines()) if comment else ""
    return head + "\n".join(blocks)


def loads_complexes(text: str) -> list[PureComplex]:
    out: list[PureComplex] = []
    block: list[str] = []

    def flush() -> None:
        if not block:
            return
        try:
            m, n = (int(t) for t in block[0].split())
        except ValueError as exc:
            raise FormatError(f"bad header line {block[0]!r}") from exc
        try:
            facets = tuple(vset(int(t) for t in line.split()) for line in block[1:])
            used = 0
            for f in facets:
                used |= f
            out.append(PureComplex(m, n, facets, used != full_set(m)))
        except (ComplexError, ValueError) as exc:
            raise FormatError(str(exc)) from exc
        block.clear()

    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            flush()
            continue
        block.append(line)
    flush()
    return out


def write_complexes(path: str | Path, complexes: Iterable[PureComplex], comment: str | None = None) -> None:
    Path(path).write_text(dumps_complexes(complexes, comment), encoding="utf-8")


def read_complexes(path: str | Path) -> list[PureComplex]:
    return loads_complexes(Path(path).read_text(encoding="utf-8"))


def dumps_matrix(mat, ring: str) -> str:
    arr = np.asarray(mat, dtype=np.int64)
    if ring not in ("Z2", "Z"):
        raise FormatError(f"unknown ring {ring!r}")
    rows, cols = arr.shape
    lines = [f"{rows} {cols} {ring}"]
    lines.extend(" ".join(str(int(x)) for x in row) for row in arr)
    return "\n".join(lines) + "\n"


def loads_matrix(text: str) -> tuple[np.ndarray, str]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise FormatError("empty matrix file")
    try:
        rows_s, cols_s, ring = lines[0].split()
        rows, cols = int(rows_s), int(cols_s)
        data = [[int(t) for t in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise FormatError(f"malformed matrix: {exc}") from exc
    if ring not in ("Z2", "Z"):
        raise FormatError(f"unknown ring {ring!r}")
    if len(data) != rows or any(len(r) != cols for r in data):
        raise FormatError("matrix shape does not match header")
    arr = np.array(data, dtype=np.int64).reshape(rows, cols)
    if ring == "Z2" and not np.isin(arr, (0, 1)).all():
        raise FormatError("Z2 matrix entries must be 0 or 1")
    return arr, ring


def read_matrix(path: str | Path) -> tuple[np.ndarray, str]:
    return loads_matrix(Path(path).read_text(encoding="utf-8"))


def write_matrix(path: str | Path, mat, ring: str) -> None:
    Path(path).write_text(dumps_matrix(mat, ring), encoding="utf-8")
