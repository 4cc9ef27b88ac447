from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from admodel.linalg import (MatrixSystem, QMatrix, Subspace, format_rational, image, kernel,
                            quotient, rational, rref, solve)

small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_rows=4, max_cols=4):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    return QMatrix([[draw(small) for _ in range(c)] for _ in range(r)], r, c)


def test_rref_examples():
    assert rref(QMatrix.identity(2)) == (QMatrix.identity(2), [0, 1])
    assert rref(QMatrix.zero(3, 2)) == (QMatrix.zero(3, 2), [])
    assert rref(QMatrix([[1, 2], [2, 4]])) == (QMatrix([[1, 2], [0, 0]]), [0])


def test_kernel_examples():
    assert kernel(QMatrix.identity(3)).dim == 0
    assert kernel(QMatrix.zero(3, 3)) == Subspace.full(3)
    assert kernel(QMatrix([[1, 1]])) == Subspace(2, [[1, -1]])


def test_image_examples():
    assert image(QMatrix.identity(2)) == Subspace.full(2)
    assert image(QMatrix.zero(2, 2)).dim == 0
    assert image(QMatrix([[1], [2]])) == Subspace(2, [[1, 2]])


def test_solve_examples():
    assert solve(QMatrix.identity(2), [3, 4]) == (3, 4)
    assert solve(QMatrix.zero(2, 2), [1, 0]) is None
    assert solve(QMatrix([[1, 1]]), [3]) == (3, 0)


def test_quotient_examples():
    q = quotient(3, Subspace.zero(3))
    assert q.dim == 3 and q.projection.is_identity()
    assert quotient(2, Subspace.full(2)).dim == 0
    q = quotient(2, Subspace(2, [[1, 1]]))
    assert q.dim == 1
    assert kernel(q.projection) == Subspace(2, [[1, 1]])
    assert (q.projection @ q.lift).is_identity()


def test_empty_matrices_are_zero_maps():
    m = QMatrix.zero(0, 3)
    assert kernel(m) == Subspace.full(3)
    assert image(m).dim == 0
    assert (QMatrix.zero(2, 0) @ QMatrix.zero(0, 3)) == QMatrix.zero(2, 3)


def test_rational_serialization():
    assert format_rational(Fraction(3)) == "3"
    assert format_rational(Fraction(-2, 6)) == "-1/3"
    assert rational("4/6") == Fraction(2, 3)
    with pytest.raises(TypeError):
        rational(1.5)


def test_big_integer_pivots_stay_exact():
    n = 8
    hilbert = QMatrix([[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)])
    inv = hilbert.inverse()
    assert (hilbert @ inv).is_identity()
    assert max(abs(inv[i, j]) for i in range(n) for j in range(n)) > 10 ** 9


@given(matrices())
def test_rank_nullity(m):
    assert kernel(m).dim + image(m).dim == m.cols


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_is_sound_and_complete(m, b):
    b = b[:m.rows]
    x = solve(m, b)
    if x is None:
        assert tuple(Fraction(v) for v in b) not in image(m)
    else:
        assert m @ x == tuple(Fraction(v) for v in b)


@given(matrices(), matrices())
def test_subspace_equality_is_syntactic(m, n):
    if m.rows != n.rows:
        return
    a, b = image(m), image(n)
    same = a.contains_subspace(b) and b.contains_subspace(a)
    assert same == (a == b)


@given(matrices())
def test_rref_is_idempotent(m):
    r, piv = rref(m)
    assert rref(r) == (r, piv)
    assert kernel(r) == kernel(m)


@settings(max_examples=30)
@given(matrices(4, 4))
def test_inverse_roundtrip(m):
    if m.rows == m.cols and m.is_invertible():
        assert (m @ m.inverse()).is_identity()


def test_matrix_system_kernel_of_commutant():
    # matrices commuting with the swap: span{I, swap}
    swap = QMatrix([[0, 1], [1, 0]])
    sys_ = MatrixSystem()
    sys_.unknown("X", 2, 2)
    sys_.equation([(swap, "X", None, 1), (None, "X", swap, -1)], (2, 2))
    basis = sys_.kernel()
    assert len(basis) == 2
    for b in basis:
        assert swap @ b["X"] == b["X"] @ swap


def test_matrix_system_solve_with_fixed_block():
    sys_ = MatrixSystem()
    sys_.unknown("X", 1, 2)
    sys_.equation([(None, "X", QMatrix([[1], [1]]), 1)], (1, 1), QMatrix([[5]]))
    sol = sys_.solve()
    assert sol["X"] @ QMatrix([[1], [1]]) == QMatrix([[5]])
    sys_.fix("X", QMatrix([[1, 1]]))
    assert sys_.solve() is None
