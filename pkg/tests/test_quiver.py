import numpy as np
import pytest

from pyramid_tda.errors import IndexOutOfRange, ShapeMismatch
from pyramid_tda.gflinalg import GF2Matrix
from pyramid_tda.quiver import (
    Arrow,
    IntervalSummand,
    QuiverRep,
    basis_change,
    decompose,
    dimension_vector,
    from_barcode,
    interval_module,
    random_invertible,
    validate,
    zero_module,
)

F, B = Arrow.FORWARD, Arrow.BACKWARD


def test_interval_module_is_its_own_barcode():
    rep = interval_module(4, [F, B, B, F], 1, 3)
    assert rep.dims == (0, 1, 1, 1, 0)
    assert decompose(rep) == (IntervalSummand(1, 3),)


def test_interval_module_bounds():
    with pytest.raises(IndexOutOfRange):
        interval_module(2, [F, F], 1, 3)
    with pytest.raises(ShapeMismatch):
        interval_module(2, [F], 0, 1)


def test_zero_module_has_no_bars():
    assert decompose(zero_module(3, [F, B, F])) == ()


def test_validate_reports_bad_shapes():
    rep = QuiverRep((1, 1), (GF2Matrix.zeros(2, 1),), (F,))
    assert validate(rep) == ["map 0 has shape (2, 1), expected (1, 1)"]
    assert validate(QuiverRep((1, 1), (), (F,))) == ["0 maps given for 1 edges"]
    with pytest.raises(ShapeMismatch):
        decompose(rep)


def test_decompose_after_a_basis_change():
    # forward then backward: [0,1] and [1,2] glued at vertex 1
    rep = from_barcode(2, [F, B], [IntervalSummand(0, 1), IntervalSummand(1, 2)])
    rng = np.random.default_rng(0)
    changed = basis_change(rep, [random_invertible(d, rng) for d in rep.dims])
    assert decompose(changed) == (IntervalSummand(0, 1), IntervalSummand(1, 2))


def test_backward_kernel_starts_a_bar():
    # V0 <- V1 with the zero map: the vector at V1 is born there
    rep = QuiverRep((1, 1), (GF2Matrix.zeros(1, 1),), (B,))
    assert decompose(rep) == (IntervalSummand(0, 0), IntervalSummand(1, 1))


def test_dimension_vector():
    bars = [IntervalSummand(0, 2, 2), IntervalSummand(1, 1)]
    assert dimension_vector(bars, 3) == (2, 3, 2, 0)


def _random_barcode(rng, n):
    bars = []
    for _ in range(int(rng.integers(0, 7))):
        b = int(rng.integers(0, n + 1))
        d = int(rng.integers(b, n + 1))
        bars.append((b, d))
    out = {}
    for bar in bars:
        out[bar] = out.get(bar, 0) + 1
    return tuple(IntervalSummand(b, d, k) for (b, d), k in sorted(out.items()))


def test_decompose_recovers_hidden_barcodes():
    rng = np.random.default_rng(12345)
    for _ in range(500):
        n = int(rng.integers(1, 13))
        orientation = [F if rng.random() < 0.5 else B for _ in range(n)]
        truth = _random_barcode(rng, n)
        rep = from_barcode(n, orientation, truth)
        hidden = basis_change(rep, [random_invertible(d, rng) for d in rep.dims])
        assert decompose(hidden) == truth, (orientation, truth)
