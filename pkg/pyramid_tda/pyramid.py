"""Diamond moves, the Mayer–Vietoris pyramid and the extended/levelsets bijection.

Pyramid nodes are symbolic pairs of unions of "atoms": atom 2i is the level
f^-1(s_i) and atom 2i+1 the open slab between s_i and s_{i+1}, so X_i^j is
the run of atoms 2i..2j. Nodes sit on a grid (x, h) with x + h odd; the
southern edge is the levelsets zigzag, the columns x = 0 and x = 2n+2 are the
western and eastern edges (zero spaces). Positions along any monotone path
are x coordinates.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .complex import RelativePair, SimplicialComplex, VertexFunction, span_subcomplex, split_graph_at_levels
from .config import get_settings
from .errors import (
    IndexOutOfRange,
    InternalError,
    MalformedEPInterval,
    MalformedInterval,
    PathsNotConnected,
    TooLarge,
)
from .persistence import (
    INF,
    EPInterval,
    EPType,
    Flavor,
    GradedBarcode,
    Interval,
    ZigzagDiagram,
    check_levels,
    critical_value,
    regular_values,
)
from .quiver import Arrow

logger = logging.getLogger(__name__)

PositionBar = tuple[int, int, int]  # (degree, b, d)


def _move_bar(b: int, d: int, k: int) -> tuple[int, int]:
    if b <= k - 1 and d == k:
        return b, k - 1
    if b <= k - 1 and d == k - 1:
        return b, k
    if b == k and d >= k + 1:
        return k + 1, d
    if b == k + 1 and d >= k + 1:
        return k, d
    return b, d


def diamond_move(
    bc: Mapping[PositionBar, int] | Iterable[PositionBar],
    k: int,
    n: int | None = None,
    with_degree_shift: bool = True,
    to_intersection: bool = True,
) -> Counter:
    """
    Barcode on the other side of the exact square at position k.

    The correspondence is an involution: [b,k] <-> [b,k-1] for b <= k-1,
    [k,d] <-> [k+1,d] for d >= k+1, and every other bar is fixed. The bar
    [k,k] in degree p+1 on the union side matches [k,k] in degree p on the
    intersection side; without the degree shift it has no partner.

    :param bc: multiset of (degree, b, d)
    :param k: position of the square's top (union) or bottom (intersection)
    :param n: last position of the zigzag, for the 1 <= k <= n-1 check
    :param with_degree_shift: match the [k,k] bars across degrees
    :param to_intersection: direction of the move (union side to intersection side)
    :return: the transformed multiset
    """
    if k < 1 or (n is not None and k > n - 1):
        raise IndexOutOfRange(f"diamond position {k} outside 1..{'n-1' if n is None else n - 1}")
    counts = bc if isinstance(bc, Mapping) else Counter(bc)
    out: Counter = Counter()
    shift = -1 if to_intersection else 1
    for (degree, b, d), mult in counts.items():
        if b == d == k:
            if not with_degree_shift:
                continue
            if degree + shift < 0:
                raise InternalError(f"bar [{k},{k}] in degree {degree} has no partner in degree {degree + shift}")
            out[(degree + shift, k, k)] += mult
        else:
            nb, nd = _move_bar(b, d, k)
            out[(degree, nb, nd)] += mult
    return out


Atoms = frozenset[int]


def interlevel(i: int, j: int) -> Atoms:
    """X_i^j as a set of atoms."""
    return frozenset(range(2 * i, 2 * j + 1))


def _runs(atoms: Atoms) -> list[tuple[int, int]]:
    runs: list[tuple[int, int]] = []
    for a in sorted(atoms):
        if runs and runs[-1][1] == a - 1:
            runs[-1] = (runs[-1][0], a)
        else:
            runs.append((a, a))
    return runs


def _atoms_label(atoms: Atoms) -> str:
    if not atoms:
        return "∅"
    parts = []
    for u, v in _runs(atoms):
        if u % 2 or v % 2:
            parts.append(f"atoms {u}..{v}")
        else:
            parts.append(f"X_{u // 2}^{v // 2}")
    return " ∪ ".join(parts)


@dataclass(frozen=True)
class PyramidNode:
    x: int
    h: int
    first: Atoms
    second: Atoms = frozenset()
    edge: bool = False

    @property
    def is_empty(self) -> bool:
        return self.edge or self.first == self.second

    @property
    def label(self) -> str:
        if self.is_empty:
            return "∅"
        if not self.second:
            return _atoms_label(self.first)
        return f"({_atoms_label(self.first)}, {_atoms_label(self.second)})"


def node_label(node: PyramidNode) -> str:
    return node.label


@dataclass(frozen=True)
class Diamond:
    bottom: tuple[int, int]
    left: tuple[int, int]
    right: tuple[int, int]
    top: tuple[int, int]


@dataclass(frozen=True)
class Pyramid:
    n: int
    nodes: Mapping[tuple[int, int], PyramidNode]
    diamonds: tuple[Diamond, ...]

    @property
    def width(self) -> int:
        return 2 * self.n + 2

    def node(self, x: int, h: int) -> PyramidNode:
        if 0 < x < self.width:
            return self.nodes[(x, h)]
        # western and eastern edges: zero spaces at every odd height
        return PyramidNode(x, h, frozenset(), frozenset(), edge=True)

    def has_node(self, x: int, h: int) -> bool:
        return (x, h) in self.nodes or ((x == 0 or x == self.width) and h >= 1 and h % 2 == 1)

    def southern_edge(self) -> list[PyramidNode]:
        return [self.nodes[(x, 0 if x % 2 else 1)] for x in range(1, self.width)]


def build_pyramid(n: int, cap: int | None = None) -> Pyramid:
    """
    Complete the southern edge X_0^0 -> X_0^1 <- X_1^1 ... <- X_n^n diamond by diamond.

    Every diamond with bottom (A,B), left (C,D) and right (E,F) gets the top
    (C ∪ E, D ∪ F); a zero edge corner counts as (A, A). Tops with equal
    components form the northern edge and are not completed further.

    :param n: number of critical values
    :param cap: largest n accepted; TDA_PYRAMID_CAP by default
    :return: the pyramid with its nodes and diamonds
    """
    cap = get_settings().pyramid_cap if cap is None else cap
    if n < 1:
        raise IndexOutOfRange(f"a pyramid needs at least one critical value, got {n}")
    if n > cap:
        raise TooLarge(f"pyramid for n={n} exceeds the cap {cap}")
    width = 2 * n + 2
    nodes: dict[tuple[int, int], PyramidNode] = {}
    for x in range(1, width):
        if x % 2:
            i = (x - 1) // 2
            nodes[(x, 0)] = PyramidNode(x, 0, interlevel(i, i))
        else:
            i = x // 2 - 1
            nodes[(x, 1)] = PyramidNode(x, 1, interlevel(i, i + 1))
    collapsed: set[tuple[int, int]] = set()
    diamonds: list[Diamond] = []

    def corner(x: int, h: int, bottom: PyramidNode) -> tuple[Atoms, Atoms] | None:
        if x == 0 or x == width:
            return (bottom.first, bottom.first) if h % 2 else None
        node = nodes.get((x, h))
        if node is None or (x, h) in collapsed:
            return None
        return node.first, node.second

    changed = True
    while changed:
        changed = False
        for (x, h) in sorted(nodes):
            if (x, h) in collapsed or (x, h + 2) in nodes:
                continue
            bottom = nodes[(x, h)]
            left = corner(x - 1, h + 1, bottom)
            right = corner(x + 1, h + 1, bottom)
            if left is None or right is None:
                continue
            top = PyramidNode(x, h + 2, left[0] | right[0], left[1] | right[1])
            nodes[(x, h + 2)] = top
            if top.first == top.second:
                collapsed.add((x, h + 2))
            diamonds.append(Diamond((x, h), (x - 1, h + 1), (x + 1, h + 1), (x, h + 2)))
            changed = True
    logger.debug("pyramid n=%d: %d nodes, %d diamonds", n, len(nodes), len(diamonds))
    return Pyramid(n, nodes, tuple(diamonds))


@dataclass(frozen=True)
class MonotoneZigzag:
    """A west-to-east path through the pyramid, one height per column x = 0..2n+2."""

    heights: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(abs(b - a) != 1 for a, b in zip(self.heights, self.heights[1:])):
            raise IndexOutOfRange(f"path {self.heights} is not a sequence of adjacent nodes")

    def arrows(self) -> tuple[Arrow, ...]:
        return tuple(Arrow.FORWARD if b > a else Arrow.BACKWARD for a, b in zip(self.heights, self.heights[1:]))

    def nodes(self, pyramid: Pyramid) -> list[PyramidNode]:
        return [pyramid.node(x, h) for x, h in enumerate(self.heights)]

    def check(self, pyramid: Pyramid) -> None:
        if len(self.heights) != pyramid.width + 1:
            raise IndexOutOfRange(f"path has {len(self.heights)} nodes, pyramid columns are 0..{pyramid.width}")
        for x, h in enumerate(self.heights):
            if not pyramid.has_node(x, h):
                raise IndexOutOfRange(f"path leaves the pyramid at ({x}, {h})")


def lzz_path(n: int) -> MonotoneZigzag:
    return MonotoneZigzag((1,) + tuple(0 if x % 2 else 1 for x in range(1, 2 * n + 2)) + (1,))


def extended_path(n: int) -> MonotoneZigzag:
    return MonotoneZigzag((1,) + tuple(x - 1 for x in range(1, 2 * n + 3)))


def up_down_path(n: int) -> MonotoneZigzag:
    """X_0^0 -> X_0^1 -> ... -> X_0^n <- X_1^n <- ... <- X_n^n."""
    return MonotoneZigzag((1,) + tuple(min(x - 1, 2 * n + 1 - x) for x in range(1, 2 * n + 2)) + (1,))


@dataclass(frozen=True)
class TraceStep:
    path: MonotoneZigzag
    degree: int
    b: int
    d: int
    move: int | None = None  # column of the diamond just crossed
    raised: bool | None = None


def _next_move(pyramid: Pyramid, current: list[int], target: Sequence[int]) -> tuple[int, bool]:
    last = len(current) - 1
    for x in range(len(current)):
        h = current[x]
        if h == target[x]:
            continue
        up = target[x] > h
        step = 1 if up else -1
        neighbours = [current[y] for y in (x - 1, x + 1) if 0 <= y <= last]
        if all(v == h + step for v in neighbours) and pyramid.has_node(x, h + 2 * step):
            return x, up
    raise PathsNotConnected(f"no diamond move leads from {tuple(current)} towards {tuple(target)}")


def trace_interval(
    pyramid: Pyramid, path1: MonotoneZigzag, path2: MonotoneZigzag, interval: PositionBar
) -> tuple[TraceStep, ...]:
    """
    Follow one bar through the diamond moves turning path1 into path2.

    Moves are made at the lowest column where a move towards path2 is
    possible. Edge columns carry zero spaces and leave the bar untouched.

    :param interval: (degree, b, d) in x coordinates of path1
    :return: the bar after each move, starting with the input
    """
    path1.check(pyramid)
    path2.check(pyramid)
    degree, b, d = interval
    current = list(path1.heights)
    steps = [TraceStep(path1, degree, b, d)]
    while tuple(current) != path2.heights:
        x, up = _next_move(pyramid, current, path2.heights)
        current[x] += 2 if up else -2
        if 0 < x < pyramid.width:
            moved = diamond_move({(degree, b, d): 1}, x, with_degree_shift=True, to_intersection=not up)
            ((degree, b, d),) = moved
        steps.append(TraceStep(MonotoneZigzag(tuple(current)), degree, b, d, move=x, raised=up))
    if steps[-1].degree != interval[0]:
        logger.info("trace shifted degree %d -> %d", interval[0], steps[-1].degree)
    return tuple(steps)


def realize_path(
    pyramid: Pyramid,
    path: MonotoneZigzag,
    G: SimplicialComplex,
    f: VertexFunction,
    levels: Sequence[float] | None = None,
) -> ZigzagDiagram:
    """
    Concrete diagram of pairs along a path, for a graph split at the regular values.

    Atom runs X_i^j become full subcomplexes of the split graph between
    s_i and s_j; zero nodes become (Y, Y) or the empty pair so that every
    arrow stays an inclusion.
    """
    path.check(pyramid)
    a = f.critical_values()
    if len(a) != pyramid.n:
        raise IndexOutOfRange(f"function has {len(a)} critical values, pyramid has {pyramid.n}")
    s = tuple(levels) if levels is not None else regular_values(a)
    check_levels(a, s)
    split, g = split_graph_at_levels(G, f, s)

    def space(atoms: Atoms) -> SimplicialComplex:
        runs = _runs(atoms)
        if any(u % 2 or v % 2 for u, v in runs):
            raise InternalError(f"atom set {sorted(atoms)} does not start and end on levels")
        bounds = [(s[u // 2], s[v // 2]) for u, v in runs]
        return span_subcomplex(split, lambda w: any(lo <= g(w) <= hi for lo, hi in bounds))

    nodes = path.nodes(pyramid)
    arrows = path.arrows()
    pairs: list[RelativePair | None] = [None] * len(nodes)
    for x, node in enumerate(nodes):
        if not node.edge:
            pairs[x] = RelativePair(space(node.first), space(node.second))
    for x, node in enumerate(nodes):
        if node.edge:
            # an edge entered by an upward arrow must contain its neighbour
            nb = x - 1 if x > 0 else x + 1
            entered = (x > 0 and arrows[x - 1] is Arrow.FORWARD) or (x == 0 and arrows[0] is Arrow.BACKWARD)
            if entered and pairs[nb] is not None:
                pairs[x] = RelativePair(pairs[nb].ambient, pairs[nb].ambient)
            else:
                pairs[x] = RelativePair(SimplicialComplex.empty())
    return ZigzagDiagram(tuple(pairs), arrows)


def ep_to_lzz(bc: GradedBarcode) -> GradedBarcode:
    """
    Extended barcode to levelsets zigzag barcode, shifting Rel and ExtMinus down a degree.

    Barcodes of tie-broken functions can hold Ord, Rel or ExtMinus bars
    between two equal values; these have zero length and are dropped.
    """
    if bc.flavor is not Flavor.EXTENDED:
        raise MalformedEPInterval(f"expected an extended barcode, got {bc.flavor.value}")
    cv = bc.critical_values
    items: Counter = Counter()
    dropped = 0
    for degree, ep, mult in bc:
        lo, hi = critical_value(cv, ep.i), critical_value(cv, ep.j)
        if ep.shifted and degree < 1:
            raise MalformedEPInterval(f"{ep} cannot live in degree {degree}")
        if lo == hi and ep.type is not EPType.EXT_PLUS:
            dropped += mult
            continue
        try:
            interval = {
                EPType.ORD: lambda: Interval.closed_open(lo, hi),
                EPType.REL: lambda: Interval.open_closed(lo, hi),
                EPType.EXT_PLUS: lambda: Interval.closed(lo, hi),
                EPType.EXT_MINUS: lambda: Interval.open(lo, hi),
            }[ep.type]()
        except MalformedInterval as e:
            raise MalformedEPInterval(f"{ep} has no levelsets counterpart: {e}") from None
        items[(degree - 1 if ep.shifted else degree, interval)] += mult
    if dropped:
        logger.debug("dropped %d zero-length bars between tied values", dropped)
    return GradedBarcode.build(Flavor.LZZ, items, tuple(sorted(set(cv))))


def _index_of(value: float, index: Mapping[float, int], n: int) -> int:
    if value == -INF:
        return 0
    if value == INF:
        return n + 1
    try:
        return index[value]
    except KeyError:
        raise MalformedInterval(f"endpoint {value} is not a critical value") from None


def lzz_to_ep(bc: GradedBarcode) -> GradedBarcode:
    """Inverse of :func:`ep_to_lzz`."""
    if bc.flavor is not Flavor.LZZ:
        raise MalformedInterval(f"expected a levelsets zigzag barcode, got {bc.flavor.value}")
    cv = bc.critical_values
    index = {v: k + 1 for k, v in enumerate(cv)}
    items: Counter = Counter()
    for degree, iv, mult in bc:
        i, j = _index_of(iv.lo, index, len(cv)), _index_of(iv.hi, index, len(cv))
        ep_type, shift = {
            "co": (EPType.ORD, 0),
            "oc": (EPType.REL, 1),
            "closed": (EPType.EXT_PLUS, 0),
            "open": (EPType.EXT_MINUS, 1),
        }[iv.kind]
        try:
            ep = EPInterval(ep_type, i, j)
        except MalformedEPInterval as e:
            raise MalformedInterval(f"{iv} has no extended counterpart: {e}") from None
        items[(degree + shift, ep)] += mult
    return GradedBarcode.build(Flavor.EXTENDED, items, cv)


def extended_positions(bc: GradedBarcode) -> Counter:
    """Bars of an extended barcode as (degree, b, d) positions of the extended sequence."""
    n = len(bc.critical_values)
    out: Counter = Counter()
    for degree, ep, mult in bc:
        (bi, b_bar), (di, d_bar) = ep.birth_death()
        b = n + 1 + (n - bi + 1) if b_bar else bi
        d = n + 1 + (n - di) if d_bar else di - 1
        out[(degree, b, d)] += mult
    return out


def lzz_positions(bc: GradedBarcode) -> Counter:
    """Bars of a levelsets zigzag barcode as (degree, b, d) positions 0..2n."""
    index = {v: k + 1 for k, v in enumerate(bc.critical_values)}
    out: Counter = Counter()
    for degree, iv, mult in bc:
        i, j = index[iv.lo], index[iv.hi]
        b = 2 * i - 1 if iv.lo_closed else 2 * i
        d = 2 * j - 1 if iv.hi_closed else 2 * (j - 1)
        out[(degree, b, d)] += mult
    return out
