"""0/1 matrices with exactly d ones in every row and every column.

Matrices are stored by row support (sorted tuples of column indices), which
is the natural representation for adjacency matrices of d-regular directed
graphs on n vertices: loops are allowed, multi-edges are not.  Column
supports are derived once at construction and kept alongside, so both the
out-neighbourhood and in-neighbourhood of a vertex are O(1) to fetch.

The text format is line-oriented and bit-stable for golden-file tests::

    n d\\n
    <row 0: d sorted column indices, space-separated>\\n
    ...
    <row n-1>\\n

The identity at n=2 serializes as ``"2 1\\n0\\n1\\n"``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import (
    ColDegreeError,
    DuplicateIndexError,
    ParseError,
    RowDegreeError,
)

__all__ = [
    "BiregularMatrix",
    "build",
    "circulant",
    "identity",
    "all_ones",
    "block_diagonal",
    "serialize",
    "parse",
    "matrix_id",
    "matrix_from_id",
]


@dataclass(frozen=True)
class BiregularMatrix:
    """Immutable n-by-n 0/1 matrix with d ones per row and per column.

    Instances compare and hash by (n, d, row_supports); column supports are
    a derived view.  Use :func:`build` rather than the constructor so the
    biregularity invariants are actually checked.
    """

    n: int
    d: int
    row_supports: tuple[tuple[int, ...], ...]
    col_supports: tuple[tuple[int, ...], ...] = field(compare=False)
    _row_sets: tuple[frozenset[int], ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_row_sets", tuple(frozenset(r) for r in self.row_supports)
        )

    def entry(self, s: int, t: int) -> int:
        """Return the (s, t) entry as 0 or 1.  Indices must lie in [0, n)."""
        if not (0 <= s < self.n and 0 <= t < self.n):
            raise IndexError(f"entry ({s}, {t}) outside [0, {self.n})^2")
        return 1 if t in self._row_sets[s] else 0

    def row_set(self, s: int) -> frozenset[int]:
        """Column support of row s as a frozenset (O(1) membership)."""
        return self._row_sets[s]

    def dense_rows(self) -> list[list[int]]:
        """Expand to a dense list-of-lists of 0/1 ints."""
        rows = []
        for support in self.row_supports:
            row = [0] * self.n
            for t in support:
                row[t] = 1
            rows.append(row)
        return rows

    def transpose(self) -> "BiregularMatrix":
        """The transpose, which is again d-biregular."""
        return BiregularMatrix(self.n, self.d, self.col_supports, self.row_supports)

    def ones(self) -> Iterator[tuple[int, int]]:
        """Iterate the positions of all n*d one-entries in row-major order."""
        for s, support in enumerate(self.row_supports):
            for t in support:
                yield (s, t)

    def __repr__(self) -> str:  # keep failure output readable for small n
        return f"BiregularMatrix(n={self.n}, d={self.d}, rows={self.row_supports})"


def build(n: int, d: int, rows: Iterable[Iterable[int]]) -> BiregularMatrix:
    """Validate row supports and construct a :class:`BiregularMatrix`.

    Raises ``ValueError`` for bad (n, d) or a wrong number of rows,
    ``IndexError`` for out-of-range column indices,
    :class:`DuplicateIndexError` for repeated indices within a row,
    :class:`RowDegreeError` / :class:`ColDegreeError` for degree failures.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not (1 <= d <= n):
        raise ValueError(f"d must satisfy 1 <= d <= n, got d={d}, n={n}")
    row_list = [tuple(r) for r in rows]
    if len(row_list) != n:
        raise ValueError(f"expected {n} rows, got {len(row_list)}")

    col_count = [0] * n
    normalized: list[tuple[int, ...]] = []
    for s, support in enumerate(row_list):
        for t in support:
            if not (0 <= t < n):
                raise IndexError(f"row {s}: column index {t} outside [0, {n})")
        dedup = set(support)
        if len(dedup) != len(support):
            raise DuplicateIndexError(f"row {s}: duplicate column index in {support}")
        if len(support) != d:
            raise RowDegreeError(f"row {s}: {len(support)} entries, expected {d}")
        ordered = tuple(sorted(support))
        normalized.append(ordered)
        for t in ordered:
            col_count[t] += 1

    for t, c in enumerate(col_count):
        if c != d:
            raise ColDegreeError(f"column {t}: {c} entries, expected {d}")

    cols: list[list[int]] = [[] for _ in range(n)]
    for s, support in enumerate(normalized):
        for t in support:
            cols[t].append(s)  # rows visited in order, so each col list is sorted
    return BiregularMatrix(
        n, d, tuple(normalized), tuple(tuple(c) for c in cols)
    )


def circulant(n: int, d: int) -> BiregularMatrix:
    """Row s has ones at columns s, s+1, ..., s+d-1 modulo n.

    For d=1 this is the identity; for d=n the all-ones matrix.
    """
    rows = [
        tuple(sorted((s + off) % n for off in range(d)))
        for s in range(n)
    ]
    return build(n, d, rows)


def identity(n: int) -> BiregularMatrix:
    """The n-by-n identity (the d=1 circulant)."""
    return circulant(n, 1)


def all_ones(n: int) -> BiregularMatrix:
    """The n-by-n all-ones matrix (d = n)."""
    return circulant(n, n)


def block_diagonal(m: int, d: int) -> BiregularMatrix:
    """Block-diagonal matrix with m dense d-by-d all-ones blocks (n = m*d).

    Every row in block b has support {b*d, ..., b*d + d - 1}; each block
    contributes corank d-1, so the rank is exactly m.
    """
    if m < 1 or d < 1:
        raise ValueError(f"need m >= 1 and d >= 1, got m={m}, d={d}")
    n = m * d
    block = [tuple(range(b * d, (b + 1) * d)) for b in range(m)]
    rows = [block[s // d] for s in range(n)]
    return build(n, d, rows)


def serialize(a: BiregularMatrix) -> str:
    """Render the line-oriented text form (header, then one row per line)."""
    lines = [f"{a.n} {a.d}"]
    lines.extend(" ".join(str(t) for t in support) for support in a.row_supports)
    return "\n".join(lines) + "\n"


def parse(text: str) -> BiregularMatrix:
    """Parse the text form back into a matrix.

    Structural problems (bad token, wrong line count, unsorted indices,
    missing trailing newline) raise :class:`ParseError` with line/position
    information; degree and range violations surface as the corresponding
    :func:`build` errors.
    """
    if not text.endswith("\n"):
        raise ParseError("missing trailing newline")
    lines = text.split("\n")[:-1]  # drop the empty tail produced by the final \n
    if not lines:
        raise ParseError("empty input")

    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(f"header must be 'n d', got {lines[0]!r}", line=1)
    try:
        n, d = int(header[0]), int(header[1])
    except ValueError as exc:
        raise ParseError(f"non-integer header token in {lines[0]!r}", line=1) from exc
    if n < 1 or not (1 <= d <= n):
        raise ParseError(f"invalid dimensions n={n}, d={d}", line=1)
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} row lines, got {len(lines) - 1}")

    rows: list[tuple[int, ...]] = []
    for s in range(n):
        tokens = lines[s + 1].split()
        support: list[int] = []
        for pos, tok in enumerate(tokens):
            try:
                support.append(int(tok))
            except ValueError as exc:
                raise ParseError(
                    f"non-integer column index {tok!r}", line=s + 2, position=pos
                ) from exc
        for pos in range(1, len(support)):
            if support[pos] <= support[pos - 1]:
                raise ParseError(
                    "column indices must be strictly increasing",
                    line=s + 2,
                    position=pos,
                )
        rows.append(tuple(support))
    return build(n, d, rows)


# MatrixId layout: big-endian u32 n, u32 d, then n*d u16 column indices in
# row-major order.  Fixed width for given (n, d); usable as a dict key.
_ID_HEADER = struct.Struct(">II")


def matrix_id(a: BiregularMatrix) -> bytes:
    """Compact canonical byte encoding; equal matrices encode identically."""
    if a.n >= 1 << 16:
        raise ValueError(f"matrix_id supports n < 65536, got n={a.n}")
    flat = [t for support in a.row_supports for t in support]
    return _ID_HEADER.pack(a.n, a.d) + struct.pack(f">{len(flat)}H", *flat)


def matrix_from_id(blob: bytes) -> BiregularMatrix:
    """Inverse of :func:`matrix_id` (validates like :func:`build`)."""
    if len(blob) < _ID_HEADER.size:
        raise ParseError(f"MatrixId too short: {len(blob)} bytes")
    n, d = _ID_HEADER.unpack_from(blob, 0)
    expect = _ID_HEADER.size + 2 * n * d
    if len(blob) != expect:
        raise ParseError(f"MatrixId length {len(blob)}, expected {expect} for n={n}, d={d}")
    flat = struct.unpack_from(f">{n * d}H", blob, _ID_HEADER.size)
    rows = [flat[s * d : (s + 1) * d] for s in range(n)]
    return build(n, d, rows)
