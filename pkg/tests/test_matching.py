import math

import pytest

from pyramid_tda.matching import bottleneck, expand


def gap(s: float, t: float) -> float:
    return abs(s - t)


def half(s: float) -> float:
    return abs(s) / 2


def test_expand_by_multiplicity():
    assert expand([("a", 2), ("b", 1)]) == ["a", "a", "b"]
    assert expand([]) == []


def test_empty_sides():
    assert bottleneck([], [], gap, half) == 0.0
    assert bottleneck([4.0], [], gap, half) == 2.0
    assert bottleneck([], [1.0, 6.0], gap, half) == 3.0


@pytest.mark.parametrize(
    "left, right, expected",
    [
        ([1.0, 5.0], [1.5, 5.0], 0.5),
        ([1.0, 5.0], [5.0, 1.5], 0.5),
        ([10.0], [10.5, 0.2], 0.5),
        ([10.0], [0.0], 5.0),
    ],
)
def test_bottleneck_values(left, right, expected):
    assert bottleneck(left, right, gap, half) == expected


def test_unmatchable_items_give_infinity():
    never = lambda s: math.inf  # noqa: E731
    assert bottleneck([1.0], [], gap, never) == math.inf
    assert bottleneck([1.0], [3.0], gap, never) == 2.0
