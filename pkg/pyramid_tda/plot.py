"""Deterministic SVG barcode plots."""
from __future__ import annotations

import io
import logging
import math

import matplotlib
from matplotlib.figure import Figure

from .blocks import BlockBarcode
from .persistence import Flavor, critical_value
from .strip import StripDiagram, interval_of

logger = logging.getLogger(__name__)

HASH_SALT = "pyramid-tda"


def _bars(bc) -> tuple[list[tuple[int, float, float, bool, bool]], float | None]:
    """(degree, lo, hi, lo_closed, hi_closed) in plot coordinates, and the divider position."""
    if isinstance(bc, BlockBarcode):
        return [(deg, blk.a, blk.b, True, True) for deg, blk, k in bc for _ in range(k)], None
    if isinstance(bc, StripDiagram):
        bars = []
        for m, k in bc:
            deg, iv = interval_of(m)
            bars += [(deg, iv.lo, iv.hi, iv.lo_closed, iv.hi_closed)] * k
        return bars, None
    if bc.flavor is not Flavor.EXTENDED:
        return [(deg, iv.lo, iv.hi, iv.lo_closed, iv.hi_closed) for deg, iv, k in bc for _ in range(k)], None
    cv = bc.critical_values
    finite = [v for v in cv if math.isfinite(v)] or [0.0]
    top = max(finite) + 1.0
    bottom = min(finite) - 1.0

    def at(index: int, barred: bool) -> float:
        value = critical_value(cv, index)
        value = min(max(value, bottom), top)
        # the second half of the sequence runs back down, mirrored past the divider
        return 2 * top - value if barred else value

    bars = []
    for deg, ep, k in bc:
        (b, b_bar), (d, d_bar) = ep.birth_death()
        bars += [(deg, at(b, b_bar), at(d, d_bar), True, False)] * k
    return bars, top


def render_svg(bc, title: str | None = None) -> str:
    """
    One horizontal bar per interval, grouped by degree and sorted by (degree, lo).

    Closed endpoints are drawn filled, open ones hollow. Extended barcodes
    place the barred half of the sequence to the right of a dotted divider.
    """
    bars, divider = _bars(bc)
    bars.sort(key=lambda bar: (bar[0], bar[1], bar[2]))
    finite = [v for bar in bars for v in bar[1:3] if math.isfinite(v)]
    if divider is not None:
        finite.append(divider)
    lo_lim = min(finite, default=0.0) - 1.0
    hi_lim = max(finite, default=1.0) + 1.0

    fig = Figure(figsize=(6, max(2.0, 0.3 * len(bars) + 1)))
    ax = fig.add_subplot(1, 1, 1)
    colors = matplotlib.colormaps["tab10"]
    for row, (deg, lo, hi, lo_closed, hi_closed) in enumerate(bars):
        color = colors(deg % 10)
        x0 = lo if math.isfinite(lo) else lo_lim
        x1 = hi if math.isfinite(hi) else hi_lim
        ax.hlines(row, x0, x1, colors=[color], linewidth=2)
        if x0 == x1:
            ax.plot([x0], [row], marker="o", color=color)
        for x, closed, finite_end in ((x0, lo_closed, math.isfinite(lo)), (x1, hi_closed, math.isfinite(hi))):
            if finite_end:
                ax.plot([x], [row], marker="o", markersize=4, color=color, markerfacecolor=color if closed else "white")
    if divider is not None:
        ax.axvline(divider, linestyle=":", color="black", linewidth=1)
    ax.set_xlim(lo_lim, hi_lim)
    ax.set_ylim(-1, max(len(bars), 1))
    ax.set_yticks(range(len(bars)))
    ax.set_yticklabels([f"H{bar[0]}" for bar in bars])
    if title:
        ax.set_title(title)
    buf = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": HASH_SALT}):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    logger.debug("rendered %d bars", len(bars))
    return buf.getvalue()
