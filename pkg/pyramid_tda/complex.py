"""Simplicial complexes, vertex functions, chain complexes and homology over GF(2)."""
from __future__ import annotations

import bisect
import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    BasisMismatch,
    DimensionTooHigh,
    DuplicateVertexInSimplex,
    InputError,
    InternalError,
    LevelHitsVertex,
    NotAnInclusion,
    SubNotContained,
    UnknownVertex,
)
from .gflinalg import ColumnSpace, GF2Matrix, mask_to_support, null_space, support_to_mask

logger = logging.getLogger(__name__)

Simplex = tuple[int, ...]


def _facets(simplex: Simplex) -> Iterable[Simplex]:
    for k in range(len(simplex)):
        yield simplex[:k] + simplex[k + 1:]


@dataclass(frozen=True)
class SimplicialComplex:
    simplices: frozenset[Simplex] = frozenset()

    def __post_init__(self) -> None:
        for s in self.simplices:
            if not s or any(b <= a for a, b in zip(s, s[1:])):
                raise InputError(f"simplex {s} is not a strictly increasing vertex tuple")
            if len(s) > 1 and any(f not in self.simplices for f in _facets(s)):
                raise InputError(f"simplex {s} is missing a face")

    @classmethod
    def empty(cls) -> SimplicialComplex:
        return cls(frozenset())

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(s[0] for s in self.simplices if len(s) == 1))

    @cached_property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    @cached_property
    def _by_dim(self) -> dict[int, tuple[Simplex, ...]]:
        groups: dict[int, list[Simplex]] = {}
        for s in self.simplices:
            groups.setdefault(len(s) - 1, []).append(s)
        return {p: tuple(sorted(g)) for p, g in groups.items()}

    def simplices_of_dim(self, p: int) -> tuple[Simplex, ...]:
        return self._by_dim.get(p, ())

    def __contains__(self, simplex: object) -> bool:
        return simplex in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    def __le__(self, other: SimplicialComplex) -> bool:
        return self.simplices <= other.simplices

    def union(self, other: SimplicialComplex) -> SimplicialComplex:
        return SimplicialComplex(self.simplices | other.simplices)

    def intersection(self, other: SimplicialComplex) -> SimplicialComplex:
        return SimplicialComplex(self.simplices & other.simplices)


def build_complex(simplices: Iterable[Sequence[int]]) -> SimplicialComplex:
    """
    Face-closure of a list of vertex tuples.

    :param simplices: maximal (or any) simplices as vertex id sequences
    :return: the smallest complex containing all of them
    """
    closed: set[Simplex] = set()
    for raw in simplices:
        if len(raw) == 0:
            raise InputError("empty simplex")
        s = tuple(sorted(int(v) for v in raw))
        if len(set(s)) != len(s):
            raise DuplicateVertexInSimplex(f"simplex {tuple(raw)} repeats a vertex")
        for k in range(1, len(s) + 1):
            closed.update(itertools.combinations(s, k))
    return SimplicialComplex(frozenset(closed))


def union_complex(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    return a.union(b)


def intersection_complex(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    return a.intersection(b)


@dataclass(frozen=True)
class VertexFunction:
    values: Mapping[int, float]

    def __call__(self, vertex: int) -> float:
        return self.values[vertex]

    @cached_property
    def is_injective(self) -> bool:
        return len(set(self.values.values())) == len(self.values)

    def critical_values(self) -> tuple[float, ...]:
        """Sorted distinct vertex values."""
        return tuple(sorted(set(self.values.values())))

    def vertex_order(self) -> tuple[int, ...]:
        """Vertices by increasing value, ties broken by vertex id."""
        return tuple(sorted(self.values, key=lambda v: (self.values[v], v)))

    def simplex_value(self, simplex: Simplex) -> float:
        return max(self.values[v] for v in simplex)

    def check_total(self, K: SimplicialComplex) -> None:
        missing = [v for v in K.vertices if v not in self.values]
        if missing:
            raise UnknownVertex(f"no function value for vertices {missing}")


@dataclass(frozen=True)
class RelativePair:
    ambient: SimplicialComplex
    sub: SimplicialComplex = field(default_factory=SimplicialComplex.empty)

    def __post_init__(self) -> None:
        if not self.sub <= self.ambient:
            raise SubNotContained("subcomplex has simplices outside the ambient complex")

    def chain_simplices(self, p: int) -> tuple[Simplex, ...]:
        return tuple(s for s in self.ambient.simplices_of_dim(p) if s not in self.sub)


def as_pair(space: SimplicialComplex | RelativePair) -> RelativePair:
    return space if isinstance(space, RelativePair) else RelativePair(space)


def span_subcomplex(K: SimplicialComplex, keep: Callable[[int], bool]) -> SimplicialComplex:
    """Full subcomplex on the vertices satisfying ``keep``."""
    kept = {v for v in K.vertices if keep(v)}
    return SimplicialComplex(frozenset(s for s in K.simplices if all(v in kept for v in s)))


@dataclass(frozen=True)
class ChainComplexGF2:
    tables: tuple[tuple[Simplex, ...], ...]
    boundaries: tuple[GF2Matrix, ...]

    def table(self, p: int) -> tuple[Simplex, ...]:
        return self.tables[p] if 0 <= p < len(self.tables) else ()

    @cached_property
    def _indices(self) -> tuple[dict[Simplex, int], ...]:
        return tuple({s: i for i, s in enumerate(t)} for t in self.tables)

    def index(self, p: int) -> dict[Simplex, int]:
        return self._indices[p] if 0 <= p < len(self.tables) else {}

    def boundary(self, p: int) -> GF2Matrix:
        """The matrix of C_p -> C_{p-1}, zero-shaped outside the stored range."""
        if 0 <= p < len(self.boundaries):
            return self.boundaries[p]
        return GF2Matrix.zeros(len(self.table(p - 1)), len(self.table(p)))


def chain_complex(K: SimplicialComplex | RelativePair) -> ChainComplexGF2:
    """Chain complex of K, or the quotient C(ambient)/C(sub) for a pair; checks that the boundary squares to zero."""
    pair = as_pair(K)
    top = pair.ambient.dim
    tables = tuple(pair.chain_simplices(p) for p in range(top + 1))
    boundaries = []
    for p, table in enumerate(tables):
        if p == 0:
            boundaries.append(GF2Matrix.zeros(0, len(table)))
            continue
        below = {s: i for i, s in enumerate(tables[p - 1])}
        columns = [[below[f] for f in _facets(s) if f in below] for s in table]
        boundaries.append(GF2Matrix.from_columns(len(tables[p - 1]), columns))
    for p in range(2, len(boundaries)):
        if not (boundaries[p - 1] @ boundaries[p]).is_zero():
            raise InternalError(f"boundary does not square to zero in degree {p}")
    return ChainComplexGF2(tables, tuple(boundaries))


@dataclass(frozen=True)
class HomologyBasis:
    """Cycle representatives forming a basis of H_p of a pair."""

    pair: RelativePair
    degree: int
    cycles: tuple[tuple[Simplex, ...], ...]
    chains: ChainComplexGF2 = field(repr=False, compare=False)

    @property
    def betti(self) -> int:
        return len(self.cycles)

    @cached_property
    def _solver(self) -> tuple[ColumnSpace, int]:
        boundaries = self.chains.boundary(self.degree + 1)
        index = self.chains.index(self.degree)
        reps = GF2Matrix.from_columns(len(index), ([index[s] for s in c] for c in self.cycles))
        return ColumnSpace(boundaries.hstack(reps)), boundaries.cols

    def coordinates(self, chain: Iterable[Simplex]) -> int:
        """Coordinates (as a bit mask over the basis) of a relative cycle, modulo boundaries."""
        index = self.chains.index(self.degree)
        try:
            mask = support_to_mask(index[s] for s in chain)
        except KeyError as e:
            raise BasisMismatch(f"simplex {e.args[0]} is not a chain of this pair") from None
        space, offset = self._solver
        x = space.solve_mask(mask)
        if x is None:
            raise BasisMismatch("chain is not a cycle of this pair")
        return x >> offset


def relative_homology_basis(pair: RelativePair, p: int) -> HomologyBasis:
    """Basis of H_p(ambient, sub) computed on the quotient chain complex."""
    chains = chain_complex(pair)
    table = chains.table(p)
    if p < 0 or not table:
        return HomologyBasis(pair, p, (), chains)
    cycles = null_space(chains.boundary(p))
    boundaries = chains.boundary(p + 1)
    space = ColumnSpace(boundaries)
    reps: list[int] = []
    for z in cycles.masks:
        # keep a cycle when it is independent of the boundaries and the cycles kept so far
        if not space.contains(z):
            reps.append(z)
            space = ColumnSpace(space.matrix.hstack(GF2Matrix.from_masks(len(table), [z])))
    return HomologyBasis(pair, p, tuple(tuple(table[i] for i in mask_to_support(z)) for z in reps), chains)


def homology_basis(K: SimplicialComplex, p: int) -> HomologyBasis:
    return relative_homology_basis(RelativePair(K), p)


def betti(K: SimplicialComplex | RelativePair, p: int) -> int:
    return relative_homology_basis(as_pair(K), p).betti


def induced_map(
    src: SimplicialComplex | RelativePair,
    dst: SimplicialComplex | RelativePair,
    p: int,
    src_basis: HomologyBasis | None = None,
    dst_basis: HomologyBasis | None = None,
) -> GF2Matrix:
    """
    Matrix of H_p of the inclusion ``src -> dst`` in the given bases.

    :param src: source space or pair
    :param dst: target space or pair containing it
    :param p: homological degree
    :param src_basis: basis of H_p(src); computed when omitted
    :param dst_basis: basis of H_p(dst); computed when omitted
    :return: a ``dst_basis.betti x src_basis.betti`` matrix
    """
    src, dst = as_pair(src), as_pair(dst)
    if not (src.ambient <= dst.ambient and src.sub <= dst.sub):
        raise NotAnInclusion("source pair is not contained in the target pair")
    src_basis = src_basis or relative_homology_basis(src, p)
    dst_basis = dst_basis or relative_homology_basis(dst, p)
    columns = []
    for cycle in src_basis.cycles:
        pushed = [s for s in cycle if s not in dst.sub]
        columns.append(dst_basis.coordinates(pushed))
    return GF2Matrix.from_masks(dst_basis.betti, columns)


def split_graph_at_levels(
    G: SimplicialComplex, f: VertexFunction, levels: Sequence[float]
) -> tuple[SimplicialComplex, VertexFunction]:
    """
    Subdivide every edge crossing a level by a vertex at that level.

    :param G: a complex of dimension at most 1
    :param f: vertex function on G
    :param levels: sorted levels, none equal to a vertex value
    :return: the subdivided graph and the extended function; new vertex ids follow max(G.vertices)
    """
    if G.dim > 1:
        raise DimensionTooHigh(f"level splitting needs a graph, got dimension {G.dim}")
    f.check_total(G)
    levels = sorted(levels)
    hits = set(levels) & set(f.values[v] for v in G.vertices)
    if hits:
        raise LevelHitsVertex(f"levels {sorted(hits)} coincide with vertex values")
    values = {v: f.values[v] for v in G.vertices}
    next_id = max(G.vertices, default=-1) + 1
    simplices: set[Simplex] = {(v,) for v in G.vertices}
    for u, v in G.simplices_of_dim(1):
        lo_v, hi_v = (u, v) if values[u] < values[v] else (v, u)
        lo, hi = values[lo_v], values[hi_v]
        inner = levels[bisect.bisect_right(levels, lo):bisect.bisect_left(levels, hi)]
        path = [lo_v]
        for s in inner:
            values[next_id] = s
            simplices.add((next_id,))
            path.append(next_id)
            next_id += 1
        path.append(hi_v)
        simplices.update(tuple(sorted(e)) for e in zip(path, path[1:]))
    logger.debug("split %d edges at %d levels into %d simplices", len(G.simplices_of_dim(1)), len(levels), len(simplices))
    return SimplicialComplex(frozenset(simplices)), VertexFunction(values)


def interlevel_betti(G: SimplicialComplex, f: VertexFunction, x: float, y: float, p: int, closed: bool = False) -> int:
    """
    Betti number of the open interlevel set f^-1((x, y)) of a graph, or of f^-1([x, y]) when ``closed``.

    The open set retracts onto the closed interlevel set between two levels
    pulled inwards by less than the distance to the nearest vertex value.
    """
    vals = [f.values[v] for v in G.vertices]
    if closed:
        if x > y:
            return 0
        cuts = sorted({t for t in (x, y) if math.isfinite(t) and t not in vals})
        split, g = split_graph_at_levels(G, f, cuts)
        return betti(span_subcomplex(split, lambda v: x <= g(v) <= y), p)
    if x >= y:
        return 0
    gaps = [y - x]
    gaps += [t - x for t in vals if t > x and math.isfinite(x)]
    gaps += [y - t for t in vals if t < y and math.isfinite(y)]
    eta = min(gaps) / 3
    lo = x + eta if math.isfinite(x) else min(vals, default=0.0) - 1.0
    hi = y - eta if math.isfinite(y) else max(vals, default=0.0) + 1.0
    split, g = split_graph_at_levels(G, f, [lo, hi] if lo < hi else [lo])
    return betti(span_subcomplex(split, lambda v: lo <= g(v) <= hi), p)
