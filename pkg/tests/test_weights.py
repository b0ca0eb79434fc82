"""Weight classification, derived weights, and the weight-spec format."""
import math

import numpy as np
import pytest

from hardylab.axis import PiecewiseFn
from hardylab.weights import (as_weight, check_delta2, check_nondegenerate,
                              check_quasi_increasing, check_Qr, derive_v012,
                              parse_weight_spec, primitive_B)


def test_primitive_of_constant_is_linear():
    B = primitive_B(PiecewiseFn.constant(2.0))
    ts = np.geomspace(1e-3, 1e3, 17)
    assert np.allclose(np.asarray(B(ts)), 2.0 * ts, rtol=1e-12)


def test_derived_weights_closed_form():
    # v = s^(-3/2), m = p = 2: v0 = 4, v1 = 4 sqrt(t), v2 = t^(-1/2)/16
    dw = derive_v012(as_weight(PiecewiseFn.power(-1.5)), 2.0, 2.0)
    ts = np.geomspace(1e-3, 1e3, 33)
    assert np.max(np.abs(np.asarray(dw.v0(ts)) - 4.0)) < 1e-6
    assert np.max(np.abs(np.asarray(dw.v1(ts)) - 4.0 * np.sqrt(ts))) < 1e-6
    assert np.max(np.abs(np.asarray(dw.v2(ts)) - ts ** -0.5 / 16.0)) < 1e-6


def test_nondegeneracy_certificate():
    assert check_nondegenerate(as_weight(PiecewiseFn.power(-1.5)), 2.0, 2.0)
    # integrable at infinity with integrable tail -> degenerate
    assert not check_nondegenerate(as_weight(PiecewiseFn.power(-3.0)),
                                   2.0, 2.0)


def test_delta2_for_powers():
    ok, _ = check_delta2(PiecewiseFn.power(2.0))
    assert ok


def test_quasi_increasing_power():
    ok, _ = check_quasi_increasing(PiecewiseFn.power(0.5))
    assert ok
    bad, _ = check_quasi_increasing(PiecewiseFn.power(-0.5))
    assert not bad


def test_Qr_class_membership():
    ok, _ = check_Qr(PiecewiseFn.power(0.25), 2.0)
    assert ok


def test_weight_spec_round_trip():
    spec = """
    # weights for a smoke run
    u = pow(-2)
    v = const(1)
    w = piecewise([0,1]: pow(2); [1,inf]: pow(-6))
    a = indicator(0.5, 2)
    """
    ws = parse_weight_spec(spec)
    assert set(ws) == {"u", "v", "w", "a"}
    assert float(ws["u"](2.0)) == pytest.approx(0.25)
    assert float(ws["w"](0.5)) == pytest.approx(0.25)
    assert float(ws["w"](2.0)) == pytest.approx(2.0 ** -6)
    assert float(ws["a"](1.0)) == 1.0 and float(ws["a"](3.0)) == 0.0


def test_weight_spec_rejects_garbage():
    with pytest.raises(ValueError):
        parse_weight_spec("u = frobnicate(3)")
    with pytest.raises(ValueError):
        parse_weight_spec("not an assignment")
