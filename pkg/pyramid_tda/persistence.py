"""Filtrations of (complex, vertex function) and their graded barcodes.

Positions of the levelsets zigzag: 2i is the level f^-1(s_i), 2i+1 the slab
f^-1([s_i, s_{i+1}]). Positions of the extended sequence: i is K_i for
i = 0..n, and n+1+j is the pair (K, L_j) for j = 0..n.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union

from .complex import (
    RelativePair,
    SimplicialComplex,
    VertexFunction,
    as_pair,
    induced_map,
    relative_homology_basis,
    span_subcomplex,
    split_graph_at_levels,
)
from .errors import (
    DimensionTooHigh,
    InvalidLevels,
    MalformedEPInterval,
    MalformedInterval,
    NotAnInclusion,
    NotInjective,
)
from .gflinalg import GF2Matrix, reduce_masks
from .quiver import Arrow, QuiverRep, decompose

logger = logging.getLogger(__name__)

INF = math.inf


class Flavor(str, Enum):
    ORDINARY = "ordinary"
    EXTENDED = "extended"
    LZZ = "lzz"
    ZIGZAG = "zigzag"


@dataclass(frozen=True, order=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise MalformedInterval("interval endpoint is NaN")
        if self.lo > self.hi:
            raise MalformedInterval(f"lo {self.lo} exceeds hi {self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise MalformedInterval(f"degenerate interval at {self.lo} must be closed")
        if (math.isinf(self.lo) and self.lo_closed) or (math.isinf(self.hi) and self.hi_closed):
            raise MalformedInterval("infinite endpoints must be open")

    @classmethod
    def closed(cls, lo: float, hi: float) -> Interval:
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo: float, hi: float) -> Interval:
        return cls(lo, hi, False, False)

    @classmethod
    def closed_open(cls, lo: float, hi: float) -> Interval:
        return cls(lo, hi, True, False)

    @classmethod
    def open_closed(cls, lo: float, hi: float) -> Interval:
        return cls(lo, hi, False, True)

    @property
    def kind(self) -> str:
        return {
            (True, True): "closed",
            (False, False): "open",
            (True, False): "co",
            (False, True): "oc",
        }[(self.lo_closed, self.hi_closed)]

    def contains(self, t: float) -> bool:
        above = t >= self.lo if self.lo_closed else t > self.lo
        below = t <= self.hi if self.hi_closed else t < self.hi
        return above and below

    def __str__(self) -> str:
        return f"{'[' if self.lo_closed else '('}{self.lo:g}, {self.hi:g}{']' if self.hi_closed else ')'}"


class EPType(str, Enum):
    ORD = "Ord"
    REL = "Rel"
    EXT_PLUS = "ExtPlus"
    EXT_MINUS = "ExtMinus"


@dataclass(frozen=True, order=True)
class EPInterval:
    """
    An extended persistence interval in critical-index form.

    Ord is [a_i, a_j), Rel is [ā_j, ā_i), ExtPlus is [a_i, ā_j) and ExtMinus
    is [a_j, ā_i); indices are 1-based, 0 and n+1 standing for -inf and +inf.
    """

    type: EPType
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i < 0 or self.j < 0:
            raise MalformedEPInterval(f"negative index in {self}")
        ok = self.i <= self.j if self.type is EPType.EXT_PLUS else self.i < self.j
        if not ok:
            raise MalformedEPInterval(f"{self.type.value} interval needs i {'<=' if self.type is EPType.EXT_PLUS else '<'} j, got i={self.i}, j={self.j}")

    @property
    def shifted(self) -> bool:
        """Rel and ExtMinus classes live one degree above their levelsets counterpart."""
        return self.type in (EPType.REL, EPType.EXT_MINUS)

    def birth_death(self) -> tuple[tuple[int, bool], tuple[int, bool]]:
        """(index, barred) for the birth and the death endpoint."""
        i, j = self.i, self.j
        return {
            EPType.ORD: ((i, False), (j, False)),
            EPType.REL: ((j, True), (i, True)),
            EPType.EXT_PLUS: ((i, False), (j, True)),
            EPType.EXT_MINUS: ((j, False), (i, True)),
        }[self.type]

    def __str__(self) -> str:
        (b, bb), (d, db) = self.birth_death()
        name = lambda k, bar: f"{'ā' if bar else 'a'}{k}"
        return f"[{name(b, bb)}, {name(d, db)}){'⁺' if self.shifted else ''}"


def critical_value(critical_values: Sequence[float], index: int) -> float:
    """a_index with a_0 = -inf and a_{n+1} = +inf."""
    if index == 0:
        return -INF
    if index == len(critical_values) + 1:
        return INF
    if 1 <= index <= len(critical_values):
        return critical_values[index - 1]
    raise MalformedEPInterval(f"critical index {index} outside 0..{len(critical_values) + 1}")


def ep_endpoints(ep: EPInterval, critical_values: Sequence[float]) -> tuple[float, float]:
    (b, _), (d, _) = ep.birth_death()
    return critical_value(critical_values, b), critical_value(critical_values, d)


AnyInterval = Union[Interval, EPInterval]


@dataclass(frozen=True)
class GradedBarcode:
    flavor: Flavor
    entries: tuple[tuple[int, AnyInterval, int], ...]
    critical_values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        want = EPInterval if self.flavor is Flavor.EXTENDED else Interval
        for degree, interval, mult in self.entries:
            if degree < 0 or mult < 1:
                raise MalformedInterval(f"bad entry degree={degree} multiplicity={mult}")
            if not isinstance(interval, want):
                raise MalformedInterval(f"{self.flavor.value} barcode cannot hold {interval!r}")

    @classmethod
    def build(
        cls,
        flavor: Flavor,
        items: Iterable[tuple[int, AnyInterval]] | Counter,
        critical_values: Sequence[float] = (),
    ) -> GradedBarcode:
        counts = items if isinstance(items, Counter) else Counter(items)
        entries = tuple((deg, iv, k) for (deg, iv), k in sorted(counts.items()) if k > 0)
        return cls(flavor, entries, tuple(critical_values))

    def counter(self) -> Counter:
        return Counter({(deg, iv): k for deg, iv, k in self.entries})

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({deg for deg, _, _ in self.entries}))

    def in_degree(self, p: int) -> GradedBarcode:
        return GradedBarcode(self.flavor, tuple(e for e in self.entries if e[0] == p), self.critical_values)

    def merge(self, other: GradedBarcode) -> GradedBarcode:
        return GradedBarcode.build(self.flavor, self.counter() + other.counter(), self.critical_values or other.critical_values)

    def __len__(self) -> int:
        return sum(k for _, _, k in self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class ZigzagDiagram:
    spaces: tuple[RelativePair, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if len(self.arrows) != max(len(self.spaces) - 1, 0):
            raise NotAnInclusion(f"{len(self.arrows)} arrows for {len(self.spaces)} spaces")
        for k, arrow in enumerate(self.arrows):
            small, big = self.spaces[k], self.spaces[k + 1]
            if arrow is Arrow.BACKWARD:
                small, big = big, small
            if not (small.ambient <= big.ambient and small.sub <= big.sub):
                raise NotAnInclusion(f"arrow {k} ({arrow.symbol}) is not an inclusion")

    @classmethod
    def of(cls, spaces: Sequence[SimplicialComplex | RelativePair], arrows: Sequence[Arrow | str]) -> ZigzagDiagram:
        return cls(tuple(as_pair(s) for s in spaces), tuple(Arrow(a) for a in arrows))


def union_zigzag(spaces: Sequence[SimplicialComplex]) -> ZigzagDiagram:
    """X_0 -> X_0 ∪ X_1 <- X_1 -> X_1 ∪ X_2 <- ... <- X_k."""
    chain: list[SimplicialComplex] = []
    arrows: list[Arrow] = []
    for k, space in enumerate(spaces):
        if k:
            chain.append(spaces[k - 1].union(space))
            arrows += [Arrow.FORWARD, Arrow.BACKWARD]
        chain.append(space)
    return ZigzagDiagram.of(chain, arrows)


def homology_module(diagram: ZigzagDiagram, p: int) -> QuiverRep:
    """H_p applied to a diagram of spaces, in freshly computed homology bases."""
    bases = [relative_homology_basis(space, p) for space in diagram.spaces]
    maps: list[GF2Matrix] = []
    for k, arrow in enumerate(diagram.arrows):
        src, dst = (k, k + 1) if arrow is Arrow.FORWARD else (k + 1, k)
        maps.append(induced_map(diagram.spaces[src], diagram.spaces[dst], p, bases[src], bases[dst]))
    return QuiverRep(tuple(b.betti for b in bases), tuple(maps), diagram.arrows)


def zigzag_barcode(d: ZigzagDiagram, p: int) -> GradedBarcode:
    """Barcode of H_p of the diagram; endpoints are diagram positions."""
    if not d.spaces:
        return GradedBarcode.build(Flavor.ZIGZAG, [])
    bars = decompose(homology_module(d, p))
    return GradedBarcode.build(
        Flavor.ZIGZAG,
        Counter({(p, Interval.closed(float(s.b), float(s.d))): s.multiplicity for s in bars}),
    )


def ordinary_barcode(K: SimplicialComplex, f: VertexFunction, p: int) -> GradedBarcode:
    """
    Lower-star sublevel persistence in degree p.

    Finite bars are [f(birth), f(death)) with zero-length pairs dropped;
    essential classes are [f(birth), +inf).
    """
    f.check_total(K)
    order = sorted(K.simplices, key=lambda s: (f.simplex_value(s), len(s), s))
    index = {s: k for k, s in enumerate(order)}
    columns = []
    for s in order:
        mask = 0
        if len(s) > 1:
            for k in range(len(s)):
                mask ^= 1 << index[s[:k] + s[k + 1:]]
        columns.append(mask)
    reduced, _, pivots = reduce_masks(columns)
    items: Counter = Counter()
    for row, col in pivots.items():
        birth, death = order[row], order[col]
        if len(birth) - 1 == p:
            lo, hi = f.simplex_value(birth), f.simplex_value(death)
            if lo < hi:
                items[(p, Interval.closed_open(lo, hi))] += 1
    for k, s in enumerate(order):
        if len(s) - 1 == p and not reduced[k] and k not in pivots:
            items[(p, Interval.closed_open(f.simplex_value(s), INF))] += 1
    return GradedBarcode.build(Flavor.ORDINARY, items, f.critical_values())


@dataclass(frozen=True)
class ExtendedFiltration:
    order: tuple[int, ...]
    values: tuple[float, ...]
    sublevels: tuple[SimplicialComplex, ...]
    superlevels: tuple[SimplicialComplex, ...]

    @property
    def n(self) -> int:
        return len(self.order)

    def spaces(self) -> tuple[RelativePair, ...]:
        K = self.sublevels[-1]
        return tuple(RelativePair(Ki) for Ki in self.sublevels) + tuple(RelativePair(K, Lj) for Lj in self.superlevels)


def extended_filtration(K: SimplicialComplex, f: VertexFunction) -> ExtendedFiltration:
    """K_i spans the i lowest vertices, L_j the j highest; ties are broken by vertex id."""
    f.check_total(K)
    order = f.vertex_order()
    rank = {v: k for k, v in enumerate(order)}
    n = len(order)
    sublevels = tuple(span_subcomplex(K, lambda v, i=i: rank[v] < i) for i in range(n + 1))
    superlevels = tuple(span_subcomplex(K, lambda v, j=j: rank[v] >= n - j) for j in range(n + 1))
    return ExtendedFiltration(order, tuple(f(v) for v in order), sublevels, superlevels)


def classify_extended(b: int, d: int, n: int) -> EPInterval:
    """Type and critical indices of the bar [b, d] of the extended sequence of length 2n+2."""
    if b <= n and d < n:
        return EPInterval(EPType.ORD, b, d + 1)
    if b <= n:
        barred_death = 2 * n + 1 - d
        if b <= barred_death:
            return EPInterval(EPType.EXT_PLUS, b, barred_death)
        return EPInterval(EPType.EXT_MINUS, barred_death, b)
    if b == n + 1:
        raise MalformedEPInterval(f"no class can be born at position {b} of the extended sequence")
    return EPInterval(EPType.REL, 2 * n + 1 - d, 2 * n + 2 - b)


def extended_barcode(K: SimplicialComplex, f: VertexFunction, p: int, perturb: bool = False) -> GradedBarcode:
    """
    Extended persistence in degree p, intervals typed Ord/Rel/ExtPlus/ExtMinus.

    :param K: the complex
    :param f: vertex function; must be injective unless ``perturb`` is set
    :param p: homological degree
    :param perturb: break ties in f by vertex id instead of failing
    :return: barcode whose critical values are the vertex values in filtration order
    """
    f.check_total(K)
    if not f.is_injective:
        if not perturb:
            raise NotInjective("vertex values repeat; enable tie-breaking to perturb")
        logger.warning("breaking ties between equal vertex values by vertex id")
    filt = extended_filtration(K, f)
    if filt.n == 0:
        return GradedBarcode.build(Flavor.EXTENDED, [], ())
    diagram = ZigzagDiagram(filt.spaces(), (Arrow.FORWARD,) * (2 * filt.n + 1))
    bars = decompose(homology_module(diagram, p))
    items = Counter({(p, classify_extended(s.b, s.d, filt.n)): s.multiplicity for s in bars})
    return GradedBarcode.build(Flavor.EXTENDED, items, filt.values)


def regular_values(critical_values: Sequence[float]) -> tuple[float, ...]:
    a = list(critical_values)
    if not a:
        return ()
    inner = [(x + y) / 2 for x, y in zip(a, a[1:])]
    return (a[0] - 1.0, *inner, a[-1] + 1.0)


def check_levels(critical_values: Sequence[float], levels: Sequence[float]) -> None:
    if len(levels) != len(critical_values) + 1:
        raise InvalidLevels(f"{len(levels)} levels for {len(critical_values)} critical values")
    merged = [levels[0]]
    for a, s in zip(critical_values, levels[1:]):
        merged += [a, s]
    if any(y <= x for x, y in zip(merged, merged[1:])):
        raise InvalidLevels("levels must strictly interleave the critical values")


def lzz_interval(b: int, d: int, critical_values: Sequence[float]) -> Interval:
    """Translate a bar of the levelsets zigzag from positions to critical values."""
    if b % 2:
        lo, lo_closed = critical_values[(b + 1) // 2 - 1], True
    else:
        lo, lo_closed = critical_values[b // 2 - 1], False
    if d % 2:
        hi, hi_closed = critical_values[(d + 1) // 2 - 1], True
    else:
        hi, hi_closed = critical_values[d // 2], False
    return Interval(lo, hi, lo_closed, hi_closed)


def lzz_barcode_graph(
    G: SimplicialComplex, f: VertexFunction, p: int, levels: Sequence[float] | None = None
) -> GradedBarcode:
    """
    Levelsets zigzag barcode of a graph, computed on the exact subdivided model.

    :param G: complex of dimension at most 1
    :param f: vertex function on G
    :param p: homological degree
    :param levels: regular values interleaving the critical values; midpoints by default
    :return: barcode over critical values with closed/open/half-open endpoints
    """
    if G.dim > 1:
        raise DimensionTooHigh(f"direct levelsets zigzag needs a graph, got dimension {G.dim}")
    f.check_total(G)
    a = f.critical_values()
    if not a:
        return GradedBarcode.build(Flavor.LZZ, [], ())
    s = tuple(levels) if levels is not None else regular_values(a)
    check_levels(a, s)
    split, g = split_graph_at_levels(G, f, s)
    spaces = []
    for k in range(2 * len(a) + 1):
        lo, hi = s[k // 2], s[(k + 1) // 2]
        spaces.append(span_subcomplex(split, lambda v, lo=lo, hi=hi: lo <= g(v) <= hi))
    arrows = [Arrow.FORWARD if k % 2 == 0 else Arrow.BACKWARD for k in range(2 * len(a))]
    positional = zigzag_barcode(ZigzagDiagram.of(spaces, arrows), p)
    items = Counter()
    for deg, iv, k in positional:
        items[(deg, lzz_interval(int(iv.lo), int(iv.hi), a))] += k
    return GradedBarcode.build(Flavor.LZZ, items, a)
