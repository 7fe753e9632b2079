import numpy as np
import pytest

from pyramid_tda.errors import ShapeMismatch
from pyramid_tda.gflinalg import (
    GF2Matrix,
    block_diagonal,
    column_reduce,
    inverse,
    low,
    null_space,
    rank,
    solve,
)
from pyramid_tda.quiver import random_invertible


def test_from_columns_cancels_repeated_rows():
    m = GF2Matrix.from_columns(3, [[0, 0, 1], [2, 1]])
    assert m.columns == ((1,), (1, 2))


def test_unsorted_support_is_rejected():
    with pytest.raises(ShapeMismatch):
        GF2Matrix(2, 1, ((1, 0),))


def test_row_index_out_of_range_is_rejected():
    with pytest.raises(ShapeMismatch):
        GF2Matrix(2, 1, ((2,),))


def test_dense_and_sparse_views_agree():
    dense = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]])
    m = GF2Matrix.from_dense(dense)
    assert (m.to_dense() == dense).all()
    assert GF2Matrix.from_sparse(m.to_sparse()) == m
    assert m.entry(2, 0) == 1 and m.entry(1, 0) == 0


def test_transpose_and_product():
    a = GF2Matrix.from_dense([[1, 1], [0, 1]])
    assert a.transpose().to_dense().tolist() == [[1, 0], [1, 1]]
    assert (a @ a).to_dense().tolist() == [[1, 0], [0, 1]]
    assert (a @ GF2Matrix.identity(2)) == a


def test_product_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        GF2Matrix.zeros(2, 3) @ GF2Matrix.zeros(2, 2)


def test_rank_and_null_space():
    m = GF2Matrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert rank(m) == 2
    kernel = null_space(m)
    assert kernel.cols == 1
    assert kernel.columns == ((0, 1, 2),)
    assert (m @ kernel).is_zero()
    assert rank(GF2Matrix.from_dense([[1, 1], [1, 1]])) == 1


def test_column_reduce_records_operations():
    rng = np.random.default_rng(3)
    m = GF2Matrix.from_dense(rng.integers(0, 2, size=(6, 8)))
    red = column_reduce(m)
    assert m @ red.ops == red.reduced
    lows = [low(c) for c in red.reduced.masks if c]
    assert len(lows) == len(set(lows)) == red.rank == rank(m)
    assert len(red.zero_columns()) == m.cols - red.rank


def test_solve():
    m = GF2Matrix.from_dense([[1, 0], [1, 1]])
    assert solve(m, [1]) == (1,)
    assert solve(m, [0]) == (0, 1)
    assert solve(GF2Matrix.from_dense([[1], [1]]), [0]) is None


def test_solve_rejects_rows_outside_the_matrix():
    with pytest.raises(ShapeMismatch):
        solve(GF2Matrix.identity(2), [5])


@pytest.mark.parametrize("n", [0, 1, 4, 9])
def test_inverse_of_random_invertible(n):
    rng = np.random.default_rng(n)
    p = random_invertible(n, rng)
    assert p @ inverse(p) == GF2Matrix.identity(n)
    assert inverse(p) @ p == GF2Matrix.identity(n)


def test_singular_matrix_has_no_inverse():
    with pytest.raises(ShapeMismatch):
        inverse(GF2Matrix.from_dense([[1, 1], [1, 1]]))


def test_block_diagonal():
    m = block_diagonal([GF2Matrix.identity(1), GF2Matrix.from_dense([[1, 1], [0, 1]])])
    assert m.to_dense().tolist() == [[1, 0, 0], [0, 1, 1], [0, 0, 1]]
