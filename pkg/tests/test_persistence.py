from collections import Counter

import numpy as np
import pytest

from pyramid_tda.complex import VertexFunction, betti, build_complex
from pyramid_tda.errors import InvalidLevels, MalformedEPInterval, MalformedInterval, NotInjective
from pyramid_tda.persistence import (
    INF,
    EPInterval,
    EPType,
    Flavor,
    GradedBarcode,
    Interval,
    ZigzagDiagram,
    check_levels,
    classify_extended,
    critical_value,
    ep_endpoints,
    extended_barcode,
    extended_filtration,
    lzz_barcode_graph,
    lzz_interval,
    ordinary_barcode,
    regular_values,
    union_zigzag,
    zigzag_barcode,
)
from pyramid_tda.pyramid import ep_to_lzz


def test_interval_validation():
    with pytest.raises(MalformedInterval):
        Interval(1.0, 0.0)
    with pytest.raises(MalformedInterval):
        Interval.open(1.0, 1.0)
    with pytest.raises(MalformedInterval):
        Interval(-INF, 0.0, True, True)
    assert Interval.closed(1.0, 1.0).kind == "closed"
    assert Interval.closed_open(0.0, INF).kind == "co"


def test_interval_contains():
    iv = Interval.open_closed(0.0, 1.0)
    assert not iv.contains(0.0)
    assert iv.contains(1.0)
    assert str(iv) == "(0, 1]"


def test_ep_interval_validation():
    EPInterval(EPType.EXT_PLUS, 2, 2)
    with pytest.raises(MalformedEPInterval):
        EPInterval(EPType.ORD, 2, 2)
    with pytest.raises(MalformedEPInterval):
        EPInterval(EPType.REL, 3, 1)


def test_ep_interval_endpoints():
    cv = (-1.0, 0.0, 2.0)
    assert ep_endpoints(EPInterval(EPType.EXT_MINUS, 1, 3), cv) == (2.0, -1.0)
    assert critical_value(cv, 0) == -INF
    assert critical_value(cv, 4) == INF
    assert str(EPInterval(EPType.REL, 1, 2)) == "[ā2, ā1)⁺"
    with pytest.raises(MalformedEPInterval):
        critical_value(cv, 5)


@pytest.mark.parametrize(
    "b, d, n, expected",
    [
        (1, 2, 4, EPInterval(EPType.ORD, 1, 3)),
        (1, 5, 4, EPInterval(EPType.EXT_PLUS, 1, 4)),
        (4, 8, 4, EPInterval(EPType.EXT_MINUS, 1, 4)),
        (2, 7, 4, EPInterval(EPType.EXT_PLUS, 2, 2)),
        (6, 7, 4, EPInterval(EPType.REL, 2, 4)),
    ],
)
def test_classify_extended(b, d, n, expected):
    assert classify_extended(b, d, n) == expected


def test_nothing_is_born_at_the_first_relative_position():
    with pytest.raises(MalformedEPInterval):
        classify_extended(5, 6, 4)


def test_circle_extended_barcode(circle):
    K, f = circle
    zero = extended_barcode(K, f, 0)
    one = extended_barcode(K, f, 1)
    assert zero.critical_values == (-1.0, 0.0, 0.0001, 1.0)
    assert zero.counter() == Counter({(0, EPInterval(EPType.EXT_PLUS, 1, 4)): 1})
    assert one.counter() == Counter({(1, EPInterval(EPType.EXT_MINUS, 1, 4)): 1})
    assert len(extended_barcode(K, f, 2)) == 0


def test_circle_levelsets_barcode(circle):
    K, f = circle
    bc = lzz_barcode_graph(K, f, 0)
    assert bc.flavor is Flavor.LZZ
    assert bc.counter() == Counter({(0, Interval.closed(-1.0, 1.0)): 1, (0, Interval.open(-1.0, 1.0)): 1})
    assert len(lzz_barcode_graph(K, f, 1)) == 0


def test_circle_ordinary_barcode(circle):
    K, f = circle
    assert ordinary_barcode(K, f, 0).counter() == Counter({(0, Interval.closed_open(-1.0, INF)): 1})
    assert ordinary_barcode(K, f, 1).counter() == Counter({(1, Interval.closed_open(1.0, INF)): 1})


def test_ordinary_barcode_of_a_merge():
    # two minima joined at the top
    K = build_complex([[0, 2], [1, 2]])
    f = VertexFunction({0: 0.0, 1: 1.0, 2: 3.0})
    bc = ordinary_barcode(K, f, 0)
    assert bc.counter() == Counter({(0, Interval.closed_open(0.0, INF)): 1, (0, Interval.closed_open(1.0, 3.0)): 1})


def test_extended_needs_an_injective_function():
    K = build_complex([[0, 1]])
    f = VertexFunction({0: 0.0, 1: 0.0})
    with pytest.raises(NotInjective):
        extended_barcode(K, f, 0)
    bc = extended_barcode(K, f, 0, perturb=True)
    assert bc.counter() == Counter({(0, EPInterval(EPType.EXT_PLUS, 1, 2)): 1})


def test_essential_classes_match_betti_numbers(complex_corpus):
    for K, f in complex_corpus:
        for p in range(K.dim + 1):
            bc = extended_barcode(K, f, p)
            ext = sum(k for _, ep, k in bc if ep.type in (EPType.EXT_PLUS, EPType.EXT_MINUS))
            assert ext == betti(K, p)


def test_levelsets_and_extended_agree_on_graphs(graph_corpus):
    for G, f in graph_corpus:
        ext = GradedBarcode.build(Flavor.EXTENDED, [], ())
        lzz = GradedBarcode.build(Flavor.LZZ, [], ())
        for p in range(3):
            ext = ext.merge(extended_barcode(G, f, p))
        for p in range(2):
            lzz = lzz.merge(lzz_barcode_graph(G, f, p))
        converted = ep_to_lzz(ext)
        assert converted.counter() == lzz.counter()
        assert converted.critical_values == f.critical_values()


def test_zigzag_of_two_points():
    a, b = build_complex([[0]]), build_complex([[1]])
    bc = zigzag_barcode(union_zigzag([a, b]), 0)
    assert bc.flavor is Flavor.ZIGZAG
    assert bc.counter() == Counter({(0, Interval.closed(0.0, 1.0)): 1, (0, Interval.closed(1.0, 2.0)): 1})


def test_zigzag_through_a_circle():
    arc1 = build_complex([[0, 1], [1, 2]])
    arc2 = build_complex([[2, 3], [3, 0]])
    circle = arc1.union(arc2)
    diagram = ZigzagDiagram.of([arc1, circle, arc2], ["forward", "backward"])
    assert zigzag_barcode(diagram, 0).counter() == Counter({(0, Interval.closed(0.0, 2.0)): 1})
    assert zigzag_barcode(diagram, 1).counter() == Counter({(1, Interval.closed(1.0, 1.0)): 1})


def test_regular_values_interleave():
    a = (-1.0, 0.0, 2.0)
    s = regular_values(a)
    assert s == (-2.0, -0.5, 1.0, 3.0)
    check_levels(a, s)
    with pytest.raises(InvalidLevels):
        check_levels(a, (-2.0, 0.0, 1.0, 3.0))
    with pytest.raises(InvalidLevels):
        check_levels(a, (-2.0, 1.0))


def test_lzz_interval_positions():
    a = (-1.0, 0.0, 0.0001, 1.0)
    assert lzz_interval(1, 7, a) == Interval.closed(-1.0, 1.0)
    assert lzz_interval(2, 6, a) == Interval.open(-1.0, 1.0)
    assert lzz_interval(3, 4, a) == Interval.closed_open(0.0, 0.0001)
    assert lzz_interval(4, 5, a) == Interval.open_closed(0.0, 0.0001)


def test_levelsets_with_custom_levels(circle):
    K, f = circle
    levels = (-5.0, -0.2, 0.00005, 0.3, 7.0)
    bc = lzz_barcode_graph(K, f, 0, levels=levels)
    assert bc.counter() == lzz_barcode_graph(K, f, 0).counter()


def _random_levels(rng, critical_values):
    a = critical_values
    inner = [lo + float(rng.uniform(0.05, 0.95)) * (hi - lo) for lo, hi in zip(a, a[1:])]
    return (a[0] - float(rng.uniform(0.01, 3.0)), *inner, a[-1] + float(rng.uniform(0.01, 3.0)))


def test_levelsets_barcode_ignores_the_choice_of_levels(graph_corpus):
    rng = np.random.default_rng(314)
    for G, f in graph_corpus:
        levels = _random_levels(rng, f.critical_values())
        for p in range(2):
            assert lzz_barcode_graph(G, f, p, levels=levels) == lzz_barcode_graph(G, f, p)


def test_ordinary_bars_of_extended_persistence(complex_corpus):
    for K, f in complex_corpus:
        for p in range(K.dim + 1):
            ext = extended_barcode(K, f, p)
            ords = Counter()
            for deg, ep, k in ext:
                if ep.type is EPType.ORD:
                    cv = ext.critical_values
                    ords[(deg, Interval.closed_open(critical_value(cv, ep.i), critical_value(cv, ep.j)))] += k
            finite = Counter({(deg, iv): k for deg, iv, k in ordinary_barcode(K, f, p) if iv.hi != INF})
            assert ords == finite


def test_forward_zigzag_is_ordinary_persistence(complex_corpus):
    for K, f in complex_corpus:
        filt = extended_filtration(K, f)
        diagram = ZigzagDiagram.of(filt.sublevels[1:], ["forward"] * (filt.n - 1))
        values = filt.values
        for p in range(K.dim + 1):
            got = Counter()
            for deg, iv, k in zigzag_barcode(diagram, p):
                b, d = int(iv.lo), int(iv.hi)
                hi = values[d + 1] if d + 1 < filt.n else INF
                got[(deg, Interval.closed_open(values[b], hi))] += k
            assert got == ordinary_barcode(K, f, p).counter()
