"""Type-A quiver representations over GF(2) and their interval decomposition."""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, ShapeMismatch
from .gflinalg import ColumnSpace, GF2Matrix, block_diagonal, inverse

logger = logging.getLogger(__name__)


class Arrow(str, Enum):
    FORWARD = "forward"  # i -> i+1
    BACKWARD = "backward"  # i <- i+1

    @property
    def symbol(self) -> str:
        return "→" if self is Arrow.FORWARD else "←"


Orientation = tuple[Arrow, ...]


@dataclass(frozen=True)
class QuiverRep:
    """Vector spaces GF(2)^dims[i] on vertices 0..n with one map per edge."""

    dims: tuple[int, ...]
    maps: tuple[GF2Matrix, ...]
    orientation: Orientation

    @property
    def n(self) -> int:
        return len(self.dims) - 1

    def expected_shape(self, e: int) -> tuple[int, int]:
        if self.orientation[e] is Arrow.FORWARD:
            return self.dims[e + 1], self.dims[e]
        return self.dims[e], self.dims[e + 1]


@dataclass(frozen=True, order=True)
class IntervalSummand:
    b: int
    d: int
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.b > self.d or self.multiplicity < 1:
            raise IndexOutOfRange(f"invalid interval summand [{self.b},{self.d}] x{self.multiplicity}")


def validate(rep: QuiverRep) -> list[str]:
    """Shape diagnostics; an empty list means the representation is well formed."""
    problems = []
    if not rep.dims:
        return ["representation has no vertices"]
    if any(d < 0 for d in rep.dims):
        problems.append(f"negative dimension in {rep.dims}")
    if len(rep.orientation) != rep.n:
        problems.append(f"orientation has {len(rep.orientation)} edges, expected {rep.n}")
    if len(rep.maps) != rep.n:
        problems.append(f"{len(rep.maps)} maps given for {rep.n} edges")
    if problems:
        return problems
    for e, m in enumerate(rep.maps):
        if m.shape != rep.expected_shape(e):
            problems.append(f"map {e} has shape {m.shape}, expected {rep.expected_shape(e)}")
    return problems


def interval_module(n: int, orientation: Sequence[Arrow], b: int, d: int) -> QuiverRep:
    """The representation that is GF(2) on [b, d] with identities inside and zero elsewhere."""
    if not 0 <= b <= d <= n:
        raise IndexOutOfRange(f"interval [{b},{d}] outside 0..{n}")
    if len(orientation) != n:
        raise ShapeMismatch(f"orientation has {len(orientation)} edges, expected {n}")
    dims = tuple(1 if b <= i <= d else 0 for i in range(n + 1))
    maps = []
    for e, arrow in enumerate(orientation):
        if dims[e] and dims[e + 1]:
            maps.append(GF2Matrix.identity(1))
        elif arrow is Arrow.FORWARD:
            maps.append(GF2Matrix.zeros(dims[e + 1], dims[e]))
        else:
            maps.append(GF2Matrix.zeros(dims[e], dims[e + 1]))
    return QuiverRep(dims, tuple(maps), tuple(orientation))


def zero_module(n: int, orientation: Sequence[Arrow]) -> QuiverRep:
    return QuiverRep((0,) * (n + 1), tuple(GF2Matrix.zeros(0, 0) for _ in range(n)), tuple(orientation))


def direct_sum(reps: Sequence[QuiverRep]) -> QuiverRep:
    if not reps:
        raise ShapeMismatch("direct sum of no representations has no shape")
    first = reps[0]
    for rep in reps[1:]:
        if rep.n != first.n or rep.orientation != first.orientation:
            raise ShapeMismatch("direct sum needs identical length and orientation")
    dims = tuple(sum(r.dims[i] for r in reps) for i in range(first.n + 1))
    maps = tuple(block_diagonal([r.maps[e] for r in reps]) for e in range(first.n))
    return QuiverRep(dims, maps, first.orientation)


def from_barcode(n: int, orientation: Sequence[Arrow], summands: Iterable[IntervalSummand]) -> QuiverRep:
    reps = [interval_module(n, orientation, s.b, s.d) for s in summands for _ in range(s.multiplicity)]
    return direct_sum(reps) if reps else zero_module(n, orientation)


def basis_change(rep: QuiverRep, changes: Sequence[GF2Matrix]) -> QuiverRep:
    """Conjugate by invertible matrices: a map A from i to j becomes P_j A P_i^-1."""
    if len(changes) != rep.n + 1:
        raise ShapeMismatch(f"{len(changes)} basis changes for {rep.n + 1} vertices")
    inverses = [inverse(p) for p in changes]
    maps = []
    for e, m in enumerate(rep.maps):
        tail, head = (e, e + 1) if rep.orientation[e] is Arrow.FORWARD else (e + 1, e)
        maps.append(changes[head] @ m @ inverses[tail])
    return QuiverRep(rep.dims, tuple(maps), rep.orientation)


def random_invertible(n: int, rng: np.random.Generator) -> GF2Matrix:
    """Product of random unit lower- and upper-triangular matrices."""
    lower = np.tril(rng.integers(0, 2, size=(n, n)), -1) + np.eye(n, dtype=np.int64)
    upper = np.triu(rng.integers(0, 2, size=(n, n)), 1) + np.eye(n, dtype=np.int64)
    perm = np.eye(n, dtype=np.int64)[rng.permutation(n)]
    return GF2Matrix.from_dense(perm @ lower @ upper % 2)


def _birth_key(birth: int, backward: bool) -> tuple[int, int]:
    # Ordering under which the vector of one bar may be added to another's
    # without breaking the prefix decomposition: bars born at a backward arrow
    # come first, youngest first; then the others, oldest first.
    return (0, -birth) if backward else (1, birth)


def _extend_to_basis(masks: Sequence[int], dim: int) -> list[int]:
    pivots: dict[int, int] = {}

    def reduce(v: int) -> int:
        while v:
            p = pivots.get(v.bit_length() - 1)
            if p is None:
                return v
            v ^= p
        return 0

    for v in masks:
        r = reduce(v)
        if r:
            pivots[r.bit_length() - 1] = r
    extra = []
    for i in range(dim):
        r = reduce(1 << i)
        if r:
            pivots[r.bit_length() - 1] = r
            extra.append(1 << i)
    return extra


def decompose(rep: QuiverRep) -> tuple[IntervalSummand, ...]:
    """
    Barcode of a type-A representation.

    Sweeps the edges left to right keeping, at the current vertex, a basis
    in which every map seen so far is a partial matching; each basis vector
    is tagged with the birth of the bar it carries.

    :param rep: a well-formed representation
    :return: interval summands sorted by (b, d) with aggregated multiplicities
    """
    problems = validate(rep)
    if problems:
        raise ShapeMismatch("; ".join(problems))
    bars: Counter[tuple[int, int]] = Counter()
    # (key, birth, vector at the current vertex)
    alive = [(_birth_key(0, False), 0, 1 << k) for k in range(rep.dims[0])]
    for e, m in enumerate(rep.maps):
        alive.sort(key=lambda item: item[0])
        if rep.orientation[e] is Arrow.FORWARD:
            pivots: dict[int, int] = {}
            survivors = []
            for key, birth, vec in alive:
                img = m.apply(vec)
                while img:
                    p = pivots.get(img.bit_length() - 1)
                    if p is None:
                        break
                    img ^= p
                if img:
                    pivots[img.bit_length() - 1] = img
                    survivors.append((key, birth, img))
                else:
                    bars[(birth, e)] += 1
            fresh = _extend_to_basis([v for _, _, v in survivors], rep.dims[e + 1])
            alive = survivors + [(_birth_key(e + 1, False), e + 1, v) for v in fresh]
        else:
            # coordinates of the image of each unit vector of V_{e+1} in the alive basis of V_e
            here = ColumnSpace(GF2Matrix.from_masks(rep.dims[e], [v for _, _, v in alive]))
            reduced: dict[int, tuple[int, int]] = {}
            kernel = []
            for c in range(rep.dims[e + 1]):
                coords = here.solve_mask(m.apply(1 << c))
                pre = 1 << c
                while coords:
                    hit = reduced.get(coords.bit_length() - 1)
                    if hit is None:
                        reduced[coords.bit_length() - 1] = (coords, pre)
                        break
                    coords ^= hit[0]
                    pre ^= hit[1]
                if not coords:
                    kernel.append(pre)
            survivors = []
            for idx, (key, birth, _) in enumerate(alive):
                if idx in reduced:
                    survivors.append((key, birth, reduced[idx][1]))
                else:
                    bars[(birth, e)] += 1
            alive = survivors + [(_birth_key(e + 1, True), e + 1, v) for v in kernel]
    for _, birth, _ in alive:
        bars[(birth, rep.n)] += 1
    logger.debug("decomposed module of length %d into %d bars", rep.n + 1, sum(bars.values()))
    return tuple(IntervalSummand(b, d, k) for (b, d), k in sorted(bars.items()))


def dimension_vector(summands: Iterable[IntervalSummand], n: int) -> tuple[int, ...]:
    dims = [0] * (n + 1)
    for s in summands:
        for i in range(s.b, s.d + 1):
            dims[i] += s.multiplicity
    return tuple(dims)
