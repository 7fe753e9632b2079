"""Exact sparse linear algebra over GF(2).

Matrices are stored column-wise as sorted row supports. Reductions run on
packed-bit Python integers (bit ``r`` of a column mask is row ``r``), which
turns the column additions that dominate persistence computations into XORs.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import ShapeMismatch

logger = logging.getLogger(__name__)


def support_to_mask(support: Iterable[int]) -> int:
    mask = 0
    for r in support:
        mask ^= 1 << r
    return mask


def mask_to_support(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        lowest = mask & -mask
        out.append(lowest.bit_length() - 1)
        mask ^= lowest
    return tuple(out)


def low(mask: int) -> int:
    """Index of the lowest nonzero row (the largest set bit), -1 for the zero column."""
    return mask.bit_length() - 1


@dataclass(frozen=True)
class GF2Matrix:
    rows: int
    cols: int
    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatch(f"negative shape {self.rows}x{self.cols}")
        if len(self.columns) != self.cols:
            raise ShapeMismatch(f"expected {self.cols} columns, got {len(self.columns)}")
        for j, col in enumerate(self.columns):
            if any(b <= a for a, b in zip(col, col[1:])):
                raise ShapeMismatch(f"column {j} support is not strictly increasing: {col}")
            if col and (col[0] < 0 or col[-1] >= self.rows):
                raise ShapeMismatch(f"column {j} has a row index outside 0..{self.rows - 1}")

    # construction

    @classmethod
    def zeros(cls, rows: int, cols: int) -> GF2Matrix:
        return cls(rows, cols, ((),) * cols)

    @classmethod
    def identity(cls, n: int) -> GF2Matrix:
        return cls(n, n, tuple((j,) for j in range(n)))

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Iterable[int]]) -> GF2Matrix:
        """Build from arbitrary row collections; repeated rows cancel mod 2."""
        cols = tuple(mask_to_support(support_to_mask(c)) for c in columns)
        return cls(rows, len(cols), cols)

    @classmethod
    def from_masks(cls, rows: int, masks: Sequence[int]) -> GF2Matrix:
        return cls(rows, len(masks), tuple(mask_to_support(m) for m in masks))

    @classmethod
    def from_dense(cls, array) -> GF2Matrix:
        arr = np.asarray(array, dtype=np.int64) % 2
        if arr.ndim != 2:
            raise ShapeMismatch(f"expected a 2-d array, got {arr.ndim} dimensions")
        rows, cols = arr.shape
        return cls(rows, cols, tuple(tuple(int(r) for r in np.flatnonzero(arr[:, j])) for j in range(cols)))

    @classmethod
    def from_sparse(cls, matrix) -> GF2Matrix:
        csc = sparse.csc_matrix(matrix)
        csc.sum_duplicates()
        rows, cols = csc.shape
        columns = []
        for j in range(cols):
            start, end = csc.indptr[j], csc.indptr[j + 1]
            entries = zip(csc.indices[start:end], csc.data[start:end])
            columns.append(tuple(sorted(int(r) for r, v in entries if int(v) % 2)))
        return cls(rows, cols, tuple(columns))

    # views

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(support_to_mask(c) for c in self.columns)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for j, col in enumerate(self.columns):
            out[list(col), j] = 1
        return out

    def to_sparse(self) -> sparse.csc_matrix:
        indptr = np.cumsum([0] + [len(c) for c in self.columns])
        indices = np.fromiter((r for c in self.columns for r in c), dtype=np.int64, count=self.nnz)
        data = np.ones(self.nnz, dtype=np.uint8)
        return sparse.csc_matrix((data, indices, indptr), shape=self.shape)

    def entry(self, row: int, col: int) -> int:
        return (self.masks[col] >> row) & 1

    # algebra

    def transpose(self) -> GF2Matrix:
        rows_of: list[list[int]] = [[] for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for r in col:
                rows_of[r].append(j)
        return GF2Matrix(self.cols, self.rows, tuple(tuple(r) for r in rows_of))

    def __matmul__(self, other: GF2Matrix) -> GF2Matrix:
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        mine = self.masks
        out = []
        for col in other.columns:
            acc = 0
            for k in col:
                acc ^= mine[k]
            out.append(acc)
        return GF2Matrix.from_masks(self.rows, out)

    def __add__(self, other: GF2Matrix) -> GF2Matrix:
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return GF2Matrix.from_masks(self.rows, [a ^ b for a, b in zip(self.masks, other.masks)])

    def apply(self, mask: int) -> int:
        """Multiply by the column vector encoded as ``mask``."""
        acc = 0
        mine = self.masks
        while mask:
            lowest = mask & -mask
            acc ^= mine[lowest.bit_length() - 1]
            mask ^= lowest
        return acc

    def hstack(self, other: GF2Matrix) -> GF2Matrix:
        if self.rows != other.rows:
            raise ShapeMismatch(f"cannot stack {self.shape} beside {other.shape}")
        return GF2Matrix(self.rows, self.cols + other.cols, self.columns + other.columns)

    def select_columns(self, indices: Iterable[int]) -> GF2Matrix:
        picked = tuple(self.columns[j] for j in indices)
        return GF2Matrix(self.rows, len(picked), picked)


@dataclass(frozen=True)
class Reduction:
    """Result of :func:`column_reduce`: ``reduced = m @ ops``."""

    reduced: GF2Matrix
    ops: GF2Matrix
    pivots: dict[int, int]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def zero_columns(self) -> list[int]:
        return [j for j, col in enumerate(self.reduced.columns) if not col]


def reduce_masks(masks: Sequence[int]) -> tuple[list[int], list[int], dict[int, int]]:
    reduced = list(masks)
    ops = [1 << j for j in range(len(masks))]
    pivots: dict[int, int] = {}
    for j in range(len(reduced)):
        col = reduced[j]
        while col:
            k = pivots.get(col.bit_length() - 1)
            if k is None:
                pivots[col.bit_length() - 1] = j
                break
            col ^= reduced[k]
            ops[j] ^= ops[k]
        reduced[j] = col
    return reduced, ops, pivots


def column_reduce(m: GF2Matrix) -> Reduction:
    """Standard left-to-right reduction: add earlier columns with the same low until lows are distinct."""
    reduced, ops, pivots = reduce_masks(m.masks)
    logger.debug("reduced %dx%d matrix, rank %d", m.rows, m.cols, len(pivots))
    return Reduction(
        reduced=GF2Matrix.from_masks(m.rows, reduced),
        ops=GF2Matrix.from_masks(m.cols, ops),
        pivots=pivots,
    )


def rank(m: GF2Matrix) -> int:
    return len(reduce_masks(m.masks)[2])


def null_space(m: GF2Matrix) -> GF2Matrix:
    """Basis of the kernel, as columns of a ``cols x nullity`` matrix."""
    reduced, ops, _ = reduce_masks(m.masks)
    return GF2Matrix.from_masks(m.cols, [ops[j] for j, col in enumerate(reduced) if not col])


class ColumnSpace:
    """A reduced matrix kept around to answer many ``m @ x = b`` queries."""

    def __init__(self, m: GF2Matrix):
        self.matrix = m
        self._reduced, self._ops, self._pivots = reduce_masks(m.masks)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def solve_mask(self, b: int) -> int | None:
        x = 0
        while b:
            k = self._pivots.get(b.bit_length() - 1)
            if k is None:
                return None
            b ^= self._reduced[k]
            x ^= self._ops[k]
        return x

    def contains(self, b: int) -> bool:
        return self.solve_mask(b) is not None


def solve(m: GF2Matrix, b: Iterable[int]) -> tuple[int, ...] | None:
    """
    Solve ``m @ x = b`` over GF(2).

    :param m: the coefficient matrix
    :param b: support (row indices) of the right-hand side; every index must be < m.rows
    :return: support of one solution x, or None when b is outside the column space
    """
    b_mask = support_to_mask(b)
    if b_mask.bit_length() > m.rows:
        raise ShapeMismatch(f"right-hand side has a row outside 0..{m.rows - 1}")
    x = ColumnSpace(m).solve_mask(b_mask)
    return None if x is None else mask_to_support(x)


def inverse(m: GF2Matrix) -> GF2Matrix:
    if m.rows != m.cols:
        raise ShapeMismatch(f"cannot invert a {m.rows}x{m.cols} matrix")
    space = ColumnSpace(m)
    columns = []
    for r in range(m.rows):
        x = space.solve_mask(1 << r)
        if x is None:
            raise ShapeMismatch("matrix is singular")
        columns.append(x)
    return GF2Matrix.from_masks(m.cols, columns)


def block_diagonal(blocks: Sequence[GF2Matrix]) -> GF2Matrix:
    masks: list[int] = []
    row_offset = 0
    for block in blocks:
        masks.extend(mask << row_offset for mask in block.masks)
        row_offset += block.rows
    return GF2Matrix.from_masks(row_offset, masks)
