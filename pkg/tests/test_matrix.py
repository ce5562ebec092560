"""Construction, validation, and serialization of d-biregular 0/1 matrices."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dreglab import (
    BiregularMatrix,
    ColDegreeError,
    DuplicateIndexError,
    ParseError,
    RowDegreeError,
    all_ones,
    block_diagonal,
    build,
    circulant,
    identity,
    matrix_from_id,
    matrix_id,
    parse,
    serialize,
)

# ─── independent oracle ──────────────────────────────────────────────────────


def dense(a: BiregularMatrix) -> np.ndarray:
    return np.array(a.dense_rows())


def dense_ok(a: BiregularMatrix) -> bool:
    """Brute-force re-check of the defining property on the dense array."""
    m = dense(a)
    return (
        m.shape == (a.n, a.n)
        and set(np.unique(m)) <= {0, 1}
        and bool((m.sum(axis=1) == a.d).all())
        and bool((m.sum(axis=0) == a.d).all())
    )


SAMPLES = [
    identity(1),
    identity(2),
    identity(7),
    circulant(5, 2),
    circulant(6, 3),
    circulant(9, 4),
    all_ones(3),
    all_ones(5),
    block_diagonal(2, 2),
    block_diagonal(3, 2),
    block_diagonal(2, 3),
]


def test_builders_satisfy_degree_property():
    for a in SAMPLES:
        assert dense_ok(a)


def test_identity_entries():
    a = identity(3)
    assert [[a.entry(s, t) for t in range(3)] for s in range(3)] == [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
    ]


def test_circulant_shape():
    a = circulant(5, 2)
    assert a.row_supports == ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4))
    assert a.d == 2


def test_block_diagonal_supports():
    a = block_diagonal(2, 2)
    assert a.n == 4 and a.d == 2
    assert a.row_supports == ((0, 1), (0, 1), (2, 3), (2, 3))


def test_entry_and_ones_agree_with_dense():
    for a in SAMPLES:
        m = dense(a)
        assert sorted(a.ones()) == [tuple(st) for st in np.argwhere(m == 1).tolist()]
        for s in range(a.n):
            for t in range(a.n):
                assert a.entry(s, t) == m[s, t]


def test_entry_range_checked():
    a = identity(3)
    with pytest.raises(IndexError):
        a.entry(3, 0)
    with pytest.raises(IndexError):
        a.entry(0, -4)


def test_transpose_involution_and_columns():
    for a in SAMPLES:
        at = a.transpose()
        assert np.array_equal(dense(at), dense(a).T)
        assert at.transpose() == a


def test_build_rejects_bad_shapes():
    with pytest.raises(ValueError):
        build(0, 1, [])
    with pytest.raises(ValueError):
        build(3, 0, [[], [], []])
    with pytest.raises(ValueError):
        build(3, 4, [[0, 1, 2]] * 3)  # d > n
    with pytest.raises(ValueError):
        build(3, 1, [[0], [1]])  # wrong row count


def test_build_rejects_bad_rows():
    with pytest.raises(DuplicateIndexError):
        build(3, 2, [[0, 0], [1, 2], [1, 2]])
    with pytest.raises(RowDegreeError):
        build(3, 2, [[0], [1, 2], [0, 1]])
    with pytest.raises(IndexError):
        build(3, 2, [[0, 3], [1, 2], [0, 1]])
    # row sums fine, column sums off
    with pytest.raises(ColDegreeError):
        build(3, 2, [[0, 1], [0, 1], [0, 2]])


def test_golden_serialization():
    assert serialize(identity(2)) == "2 1\n0\n1\n"
    assert serialize(block_diagonal(2, 2)) == "4 2\n0 1\n0 1\n2 3\n2 3\n"


def test_parse_round_trip():
    for a in SAMPLES:
        assert parse(serialize(a)) == a


def test_parse_rejections():
    with pytest.raises(ParseError):
        parse("")
    with pytest.raises(ParseError):
        parse("2 1\n0\n1")  # missing trailing newline
    with pytest.raises(ParseError):
        parse("2\n0\n1\n")  # short header
    with pytest.raises(ParseError):
        parse("2 1\n0\n1\n1\n")  # extra row
    with pytest.raises(ParseError):
        parse("2 1\n0\n")  # missing row
    with pytest.raises(ParseError):
        parse("4 2\n1 0\n0 1\n2 3\n2 3\n")  # indices not increasing
    with pytest.raises(ParseError):
        parse("2 1\nx\n1\n")  # non-integer token


def test_parse_error_carries_location():
    try:
        parse("4 2\n0 1\n0 1\n3 2\n2 3\n")
    except ParseError as exc:
        assert exc.line == 4
    else:  # pragma: no cover
        pytest.fail("expected ParseError")


def test_degree_errors_pass_through_parse():
    with pytest.raises(ColDegreeError):
        parse("3 2\n0 1\n0 1\n0 2\n")


def test_matrix_id_round_trip_and_uniqueness():
    blobs = {matrix_id(a) for a in SAMPLES}
    assert len(blobs) == len(SAMPLES)
    for a in SAMPLES:
        assert matrix_from_id(matrix_id(a)) == a


def test_equality_is_structural():
    assert build(2, 1, [[0], [1]]) == identity(2)
    assert build(2, 1, [[1], [0]]) != identity(2)


@settings(max_examples=60, deadline=None)
@given(st.permutations(list(range(8))))
def test_permutation_matrices_round_trip(perm):
    a = build(8, 1, [[p] for p in perm])
    assert dense_ok(a)
    assert parse(serialize(a)) == a
    assert matrix_from_id(matrix_id(a)) == a
    # transpose of a permutation matrix is its inverse permutation
    inv = [0] * 8
    for s, p in enumerate(perm):
        inv[p] = s
    assert a.transpose() == build(8, 1, [[q] for q in inv])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.data())
def test_circulant_family_valid(n, data):
    d = data.draw(st.integers(1, n))
    assert dense_ok(circulant(n, d))
