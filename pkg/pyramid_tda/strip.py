"""Points of the strip, the degree shift T, the interval bijection and the strip bottleneck distance.

A strip point is stored as (degree, face, a, b): the face of its diamond in
the fundamental domain and the endpoint values read through rho. Faces and
the pairs rho assigns to them at degree 0:

    S  ([a, b], ∅)                 closed bar
    W  ([a, ∞), [b, ∞))            [a, b)
    E  ((-∞, b], (-∞, a])          (a, b]
    N  (ℝ, ℝ ∖ (a, b))             open bar

In the plane the fundamental domain sits around the origin, each value
passing through arctan, and the degree shift acts by
G(x, y) = (-π - y, π - x).
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import DegreeNotNormalized, FlavorMismatch, MalformedInterval
from .matching import bottleneck, expand
from .persistence import INF, Flavor, GradedBarcode, Interval
from .pyramid import ep_to_lzz

logger = logging.getLogger(__name__)


class Face(str, Enum):
    N = "N"
    E = "E"
    S = "S"
    W = "W"


FACE_OF_KIND = {"closed": Face.S, "open": Face.N, "oc": Face.E, "co": Face.W}


@dataclass(frozen=True, order=True)
class StripPoint:
    degree: int
    face: Face
    a: float
    b: float

    def __post_init__(self) -> None:
        a, b = self.a, self.b
        if math.isnan(a) or math.isnan(b):
            raise MalformedInterval("strip point coordinate is NaN")
        if self.face is Face.S:
            ok = -INF < a <= b < INF
        elif self.face is Face.N:
            ok = a < b
        elif self.face is Face.E:
            ok = a < b < INF
        else:
            ok = -INF < a < b
        if not ok:
            raise MalformedInterval(f"({a}, {b}) is not a valid {self.face.value}-face point")


@dataclass(frozen=True)
class StripDiagram:
    points: tuple[tuple[StripPoint, int], ...]
    critical_values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if any(k < 1 for _, k in self.points):
            raise MalformedInterval("strip multiplicities must be positive")

    @classmethod
    def build(cls, items: Iterable[StripPoint] | Counter, critical_values=()) -> StripDiagram:
        counts = items if isinstance(items, Counter) else Counter(items)
        return cls(tuple((m, k) for m, k in sorted(counts.items()) if k > 0), tuple(critical_values))

    def counter(self) -> Counter:
        return Counter(dict(self.points))

    def __len__(self) -> int:
        return sum(k for _, k in self.points)

    def __iter__(self):
        return iter(self.points)


def apply_T(m: StripPoint) -> StripPoint:
    return StripPoint(m.degree + 1, m.face, m.a, m.b)


def apply_T_inv(m: StripPoint) -> StripPoint:
    return StripPoint(m.degree - 1, m.face, m.a, m.b)


@dataclass(frozen=True)
class RealSet:
    """A finite union of disjoint, non-touching intervals of the real line."""

    parts: tuple[Interval, ...] = ()

    @classmethod
    def of(cls, *intervals: Interval) -> RealSet:
        return cls(_normalize(intervals))

    @classmethod
    def real_line(cls) -> RealSet:
        return cls((Interval.open(-INF, INF),))

    def is_empty(self) -> bool:
        return not self.parts

    def union(self, other: RealSet) -> RealSet:
        return RealSet(_normalize(self.parts + other.parts))

    def difference(self, other: RealSet) -> RealSet:
        pieces = list(self.parts)
        for cut in other.parts:
            pieces = [rest for piece in pieces for rest in _minus(piece, cut)]
        return RealSet(_normalize(pieces))

    def complement(self) -> RealSet:
        return RealSet.real_line().difference(self)

    def contains(self, t: float) -> bool:
        return any(iv.contains(t) for iv in self.parts)

    def __le__(self, other: RealSet) -> bool:
        return self.difference(other).is_empty()

    def __str__(self) -> str:
        return " ∪ ".join(str(iv) for iv in self.parts) if self.parts else "∅"


def _intersect(p: Interval, q: Interval) -> Interval | None:
    if p.lo != q.lo:
        lo, lo_closed = (p.lo, p.lo_closed) if p.lo > q.lo else (q.lo, q.lo_closed)
    else:
        lo, lo_closed = p.lo, p.lo_closed and q.lo_closed
    if p.hi != q.hi:
        hi, hi_closed = (p.hi, p.hi_closed) if p.hi < q.hi else (q.hi, q.hi_closed)
    else:
        hi, hi_closed = p.hi, p.hi_closed and q.hi_closed
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return None
    return Interval(lo, hi, lo_closed, hi_closed)


def _minus(p: Interval, cut: Interval) -> list[Interval]:
    outside = []
    if cut.lo > -INF:
        outside.append(Interval(-INF, cut.lo, False, not cut.lo_closed))
    if cut.hi < INF:
        outside.append(Interval(cut.hi, INF, not cut.hi_closed, False))
    return [piece for q in outside if (piece := _intersect(p, q)) is not None]


def _normalize(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    merged: list[Interval] = []
    for iv in sorted(intervals, key=lambda iv: (iv.lo, not iv.lo_closed)):
        if merged:
            last = merged[-1]
            touches = iv.lo < last.hi or (iv.lo == last.hi and (last.hi_closed or iv.lo_closed))
            if touches:
                if iv.hi > last.hi or (iv.hi == last.hi and iv.hi_closed):
                    merged[-1] = Interval(last.lo, iv.hi, last.lo_closed, iv.hi_closed or (iv.hi == last.hi and last.hi_closed))
                continue
        merged.append(iv)
    return tuple(merged)


def rho(m: StripPoint) -> tuple[RealSet, RealSet]:
    """The pair of sets a degree-0 point stands for."""
    if m.degree != 0:
        raise DegreeNotNormalized(f"rho needs a degree-0 point, got degree {m.degree}")
    a, b = m.a, m.b
    if m.face is Face.S:
        return RealSet.of(Interval.closed(a, b)), RealSet()
    if m.face is Face.W:
        tail = RealSet() if b == INF else RealSet.of(Interval.closed_open(b, INF))
        return RealSet.of(Interval.closed_open(a, INF)), tail
    if m.face is Face.E:
        head = RealSet() if a == -INF else RealSet.of(Interval.open_closed(-INF, a))
        return RealSet.of(Interval.open_closed(-INF, b)), head
    return RealSet.real_line(), RealSet.of(Interval.open(a, b)).complement()


def interval_of(m: StripPoint) -> tuple[int, Interval]:
    """(degree, X ∖ Y) where (X, Y) is rho of the point moved to degree 0."""
    x, y = rho(StripPoint(0, m.face, m.a, m.b))
    (iv,) = x.difference(y).parts
    return m.degree, iv


def psi_inv(degree: int, iv: Interval) -> StripPoint:
    if not isinstance(iv, Interval):
        raise MalformedInterval(f"expected an interval, got {iv!r}")
    return StripPoint(degree, FACE_OF_KIND[iv.kind], iv.lo, iv.hi)


def ep_barcode_to_strip(bc: GradedBarcode) -> StripDiagram:
    lzz = ep_to_lzz(bc)
    return lzz_to_strip(lzz)


def lzz_to_strip(bc: GradedBarcode) -> StripDiagram:
    if bc.flavor is not Flavor.LZZ:
        raise FlavorMismatch(f"expected a levelsets zigzag barcode, got {bc.flavor.value}")
    return StripDiagram.build(Counter({psi_inv(deg, iv): k for deg, iv, k in bc}), bc.critical_values)


def strip_to_lzz(diagram: StripDiagram) -> GradedBarcode:
    items: Counter = Counter()
    for m, k in diagram:
        degree, iv = interval_of(m)
        if degree < 0:
            raise DegreeNotNormalized(f"point {m} has negative degree and no barcode counterpart")
        items[(degree, iv)] += k
    return GradedBarcode.build(Flavor.LZZ, items, diagram.critical_values)


# planar embedding


def _shift(point: tuple[float, float], p: int) -> tuple[float, float]:
    x, y = point
    for _ in range(p):
        x, y = -math.pi - y, math.pi - x
    for _ in range(-p):
        x, y = math.pi - y, -math.pi - x
    return x, y


def embed_point(m: StripPoint) -> tuple[float, float]:
    ta, tb = math.atan(m.a), math.atan(m.b)
    base = {
        Face.S: (ta, tb),
        Face.W: (ta, math.pi - tb),
        Face.E: (-math.pi - ta, tb),
        Face.N: (-math.pi - ta, math.pi - tb),
    }[m.face]
    return _shift(base, m.degree)


def _branch(s: float) -> int:
    return math.floor((s + math.pi / 2) / math.pi)


def d0(s: float, t: float) -> float:
    """|tan t - tan s| on a common branch of tan, +inf across branches."""
    if _branch(s) != _branch(t):
        return INF
    return abs(math.tan(t) - math.tan(s))


def planar_distance(m1: StripPoint, m2: StripPoint) -> float:
    (x1, y1), (x2, y2) = embed_point(m1), embed_point(m2)
    return max(d0(x1, x2), d0(y1, y2))


def _gap(s: float, t: float) -> float:
    return 0.0 if s == t else abs(s - t)


def d_strip(s: StripPoint, t: StripPoint) -> float:
    """
    Strip distance in value coordinates.

    Only points of one face in one degree, and an N point of degree p against
    an S point of degree p+1 (they share a copy of the real line), are at
    finite distance.
    """
    if s.degree == t.degree and s.face is t.face:
        return max(_gap(s.a, t.a), _gap(s.b, t.b))
    if t.face is Face.N and s.face is Face.S:
        s, t = t, s
    if s.face is Face.N and t.face is Face.S and t.degree == s.degree + 1:
        return max(_gap(s.a, t.b), _gap(s.b, t.a))
    return INF


def boundary_cost(m: StripPoint) -> float:
    """Distance to the boundary of the strip, reached only from the half-open faces."""
    if m.face in (Face.W, Face.E):
        return (m.b - m.a) / 2
    return INF


def bottleneck_strip(first: StripDiagram, second: StripDiagram) -> float:
    d = bottleneck(expand(first.points), expand(second.points), d_strip, boundary_cost)
    logger.debug("strip bottleneck over %d and %d points: %s", len(first), len(second), d)
    return d
