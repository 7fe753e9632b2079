"""Block barcodes of interlevel persistence, their interleaving costs and bottleneck distance.

A block lives in the poset of open interlevel pairs (x, y), x < y. Its kind
follows the endpoint closure of the levelsets bar it comes from:

    c   [a, b]   x < b and y > a          (c2 when a > b: the pair must contain [b, a])
    co  [a, b)   a < y <= b
    oc  (a, b]   a <= x < b
    o   (a, b)   a <= x and y <= b
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import FlavorMismatch, MalformedInterval
from .matching import bottleneck, expand
from .persistence import INF, Flavor, GradedBarcode, Interval

logger = logging.getLogger(__name__)


class BlockKind(str, Enum):
    O = "o"
    CO = "co"
    OC = "oc"
    C = "c"


@dataclass(frozen=True, order=True)
class Block:
    kind: BlockKind
    a: float
    b: float

    def __post_init__(self) -> None:
        if math.isnan(self.a) or math.isnan(self.b):
            raise MalformedInterval("block endpoint is NaN")
        if self.kind is BlockKind.C:
            return
        if not self.a < self.b:
            raise MalformedInterval(f"{self.kind.value}-block needs a < b, got ({self.a}, {self.b})")
        if self.kind is BlockKind.CO and self.b == INF:
            raise MalformedInterval("a co-block reaching +inf is a c-block")
        if self.kind is BlockKind.OC and self.a == -INF:
            raise MalformedInterval("an oc-block reaching -inf is a c-block")

    @property
    def subkind(self) -> str | None:
        if self.kind is not BlockKind.C:
            return None
        return "c1" if self.a <= self.b else "c2"

    def contains(self, x: float, y: float) -> bool:
        """Whether the open interlevel pair (x, y) lies in the block."""
        if not x < y:
            return False
        a, b = self.a, self.b
        return {
            BlockKind.C: lambda: x < b and y > a,
            BlockKind.CO: lambda: a < y <= b,
            BlockKind.OC: lambda: a <= x < b,
            BlockKind.O: lambda: a <= x and y <= b,
        }[self.kind]()

    def __str__(self) -> str:
        left, right = {
            BlockKind.C: ("[", "]"),
            BlockKind.CO: ("[", ")"),
            BlockKind.OC: ("(", "]"),
            BlockKind.O: ("(", ")"),
        }[self.kind]
        return f"{left}{self.a:g}, {self.b:g}{right}_BL"


@dataclass(frozen=True)
class BlockBarcode:
    entries: tuple[tuple[int, Block, int], ...]
    critical_values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        for degree, block, mult in self.entries:
            if degree < 0 or mult < 1:
                raise MalformedInterval(f"bad block entry degree={degree} multiplicity={mult}")

    @classmethod
    def build(cls, items: Iterable[tuple[int, Block]] | Counter, critical_values=()) -> BlockBarcode:
        counts = items if isinstance(items, Counter) else Counter(items)
        entries = tuple((deg, blk, k) for (deg, blk), k in sorted(counts.items()) if k > 0)
        return cls(entries, tuple(critical_values))

    def counter(self) -> Counter:
        return Counter({(deg, blk): k for deg, blk, k in self.entries})

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({deg for deg, _, _ in self.entries}))

    def in_degree(self, p: int) -> list[tuple[Block, int]]:
        return [(blk, k) for deg, blk, k in self.entries if deg == p]

    def __len__(self) -> int:
        return sum(k for _, _, k in self.entries)

    def __iter__(self):
        return iter(self.entries)


def block_of(iv: Interval) -> Block:
    """The block of a levelsets bar; bars reaching an infinite end absorb into wider kinds."""
    lo, hi = iv.lo, iv.hi
    kind = iv.kind
    if kind == "closed":
        return Block(BlockKind.C, lo, hi)
    if kind == "co":
        return Block(BlockKind.C, lo, hi) if hi == INF else Block(BlockKind.CO, lo, hi)
    if kind == "oc":
        return Block(BlockKind.C, lo, hi) if lo == -INF else Block(BlockKind.OC, lo, hi)
    if lo == -INF and hi == INF:
        return Block(BlockKind.C, lo, hi)
    if lo == -INF:
        return Block(BlockKind.CO, lo, hi)
    if hi == INF:
        return Block(BlockKind.OC, lo, hi)
    return Block(BlockKind.O, lo, hi)


def lzz_to_blocks(bc: GradedBarcode) -> BlockBarcode:
    """
    Block barcode of the interlevel persistence modules, all degrees at once.

    Every bar gives one block in its own degree; a finite open bar (a, b) in
    degree p also gives the c2 block [b, a]_BL in degree p+1, the cycle that
    an interlevel set sees once it contains all of [a, b]. Every o-block made
    here therefore has its c2 partner, so :func:`phi_bijection` finds no
    leftovers on this output.
    """
    if bc.flavor is not Flavor.LZZ:
        raise FlavorMismatch(f"blocks come from a levelsets zigzag barcode, got {bc.flavor.value}")
    items: Counter = Counter()
    for degree, iv, mult in bc:
        block = block_of(iv)
        items[(degree, block)] += mult
        if block.kind is BlockKind.O:
            items[(degree + 1, Block(BlockKind.C, block.b, block.a))] += mult
    return BlockBarcode.build(items, bc.critical_values)


def module_dimension(bc: BlockBarcode, p: int, x: float, y: float) -> int:
    """Dimension in degree p at the interlevel pair (x, y)."""
    return sum(k for blk, k in bc.in_degree(p) if blk.contains(x, y))


def vanish_eps(block: Block) -> float:
    """Least eps at which the block module is eps-interleaved with zero."""
    width = block.b - block.a
    if block.kind in (BlockKind.CO, BlockKind.OC):
        return width / 2
    if block.kind is BlockKind.O:
        return width / 4
    return INF


def _gap(s: float, t: float) -> float:
    return 0.0 if s == t else abs(s - t)


def interleave_eps(first: Block, second: Block) -> float:
    """Least eps at which the two block modules are eps-interleaved."""
    both_vanish = max(vanish_eps(first), vanish_eps(second))
    if first.kind is not second.kind:
        return both_vanish
    return min(max(_gap(first.a, second.a), _gap(first.b, second.b)), both_vanish)


def bottleneck_blocks(first: BlockBarcode, second: BlockBarcode, degree: int | None = None) -> float:
    """
    Bottleneck distance between block barcodes.

    :param degree: compare one degree only; by default the maximum over all degrees
    """
    degrees = (degree,) if degree is not None else tuple(sorted(set(first.degrees()) | set(second.degrees())))
    worst = 0.0
    for p in degrees:
        d = bottleneck(expand(first.in_degree(p)), expand(second.in_degree(p)), interleave_eps, vanish_eps)
        logger.debug("block bottleneck in degree %d: %s", p, d)
        worst = max(worst, d)
    return worst


@dataclass(frozen=True)
class PhiQuotient:
    """Block classes after identifying each o-block with its c2 partner one degree up."""

    classes: tuple[tuple[tuple[int, Block], ...], ...]
    unpaired: tuple[str, ...]


def phi_bijection(bc: BlockBarcode) -> PhiQuotient:
    """
    Pair each o-block (a, b) in degree p with the c2 block [b, a] in degree p+1.

    Barcodes from :func:`lzz_to_blocks` always pair completely, since that
    function emits the c2 partners itself. Leftovers only show up for block
    barcodes read from files or assembled by hand.
    """
    counts = bc.counter()
    classes: list[tuple[tuple[int, Block], ...]] = []
    unpaired: list[str] = []
    used: Counter = Counter()
    for (degree, blk), k in sorted(counts.items()):
        if blk.kind is not BlockKind.O:
            continue
        partner = (degree + 1, Block(BlockKind.C, blk.b, blk.a))
        paired = min(k, counts.get(partner, 0))
        classes += [((degree, blk), partner)] * paired
        used[partner] += paired
        used[(degree, blk)] += paired
        if paired < k:
            unpaired.append(f"o-block {blk} in degree {degree}: {k - paired} without a c2 partner in degree {degree + 1}")
    for (degree, blk), k in sorted(counts.items()):
        left = k - used[(degree, blk)]
        if left <= 0:
            continue
        if blk.subkind == "c2":
            unpaired.append(f"c2-block {blk} in degree {degree}: {left} without an o partner one degree down")
        classes += [((degree, blk),)] * left
    for note in unpaired:
        logger.warning("phi: %s", note)
    return PhiQuotient(tuple(classes), tuple(unpaired))
