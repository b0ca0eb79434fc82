"""The supremum operator, envelopes, Stieltjes sums, iterated compositions."""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from hardylab.axis import Mesh, PiecewiseFn, make_log_grid
from hardylab.operators import (MonotoneEnvelope, apply_Tub, iterated_lhs,
                                running_sup_right, stieltjes_vs_envelope,
                                sup_envelope)


def test_running_sup_right():
    vals = np.array([1.0, 3.0, 2.0, 0.5])
    assert np.allclose(running_sup_right(vals), [3.0, 3.0, 2.0, 0.5])
    assert np.allclose(running_sup_right(vals, tail_limit=2.5),
                       [3.0, 3.0, 2.5, 2.5])


def test_sup_envelope_of_decreasing_power():
    env = sup_envelope(PiecewiseFn.power(-1.0))
    # the envelope is tabulated on a geometric grid, so off-node values
    # carry a small interpolation error
    ts = np.geomspace(1e-3, 1e3, 11)
    vals = np.asarray(env(ts))
    assert np.max(np.abs(vals * ts - 1.0)) < 0.02
    assert np.all(np.diff(vals) <= 1e-12)


def test_sup_envelope_with_interior_bump():
    f = PiecewiseFn.indicator(1.0, 2.0)
    env = sup_envelope(f)
    assert float(env(0.5)) == pytest.approx(1.0)
    assert float(env(3.0)) == pytest.approx(0.0, abs=1e-12)


def test_apply_Tub_constant_kernel():
    # u = b = 1: (Tg)(t) = sup_{tau>=t} (1/tau) int_0^tau g; for
    # g = chi_[0,1) this equals min(1, 1/t)
    u = PiecewiseFn.constant(1.0)
    b = PiecewiseFn.constant(1.0)
    g = PiecewiseFn.indicator(0.0, 1.0)
    Tg = apply_Tub(u, b, g)
    ts = np.array([0.01, 0.5, 1.0, 2.0, 100.0])
    ref = np.minimum(1.0, 1.0 / ts)
    assert np.max(np.abs(np.asarray(Tg(ts)) - ref)) < 1e-4


def test_stieltjes_single_jump():
    # envelope = chi_[0,1): the only decrement is 1 at t = 1, so the sum
    # is G(1) for any integrand G
    mesh = Mesh(make_log_grid(1e-3, 1e3, 129),
                fns=[PiecewiseFn.indicator(0.0, 1.0)])
    vals = np.where(mesh.x < 1.0, 1.0, 0.0)
    env = MonotoneEnvelope(x=mesh.x, values=vals, limit_inf=0.0)
    out = stieltjes_vs_envelope(lambda t: np.asarray(t) ** 2, env, 0.0,
                                math.inf)
    assert out == pytest.approx(1.0, rel=1e-12)


def test_iterated_lhs_double_copson_hand_value():
    # h = u = w = chi_(0,1), m = q = 2:
    #   inner(s) = int_s^inf h = max(1 - s, 0)
    #   mid(t) = int_t^1 (1-s)^2 ds = (1-t)^3 / 3
    #   lhs^2 = int_0^1 (1-t)^3/3 dt = 1/12
    box = PiecewiseFn.indicator(0.0, 1.0)
    lhs = iterated_lhs("double-copson", box, box, box, 2.0, 2.0)
    assert lhs == pytest.approx(math.sqrt(1.0 / 12.0), rel=1e-3)


def test_iterated_lhs_outer_copson_hand_value():
    # inner(s) = min(s, 1); mid(t) = int_t^1 s^2 ds = (1 - t^3)/3;
    # lhs^2 = int_0^1 (1 - t^3)/3 dt = 1/4
    box = PiecewiseFn.indicator(0.0, 1.0)
    lhs = iterated_lhs("outer-copson", box, box, box, 2.0, 2.0)
    assert lhs == pytest.approx(0.5, rel=1e-6)


def test_iterated_lhs_vs_scipy_nested_quadrature():
    h = PiecewiseFn.power(-0.5)
    u = PiecewiseFn.indicator(0.0, 2.0)
    w = PiecewiseFn.indicator(0.0, 1.0)

    def inner(s):
        return 2.0 * math.sqrt(s)

    def mid(t):
        val, _ = quad(lambda s: inner(s) ** 1.5, 0.0, t, limit=100)
        return val

    ref_raw, _ = quad(lambda t: mid(min(t, 2.0)) ** (2.0 / 1.5), 0.0, 1.0,
                      limit=100)
    lhs = iterated_lhs("double-hardy", h, u, w, 1.5, 2.0)
    assert lhs == pytest.approx(ref_raw ** 0.5, rel=1e-3)


def test_iterated_lhs_unknown_kind():
    box = PiecewiseFn.indicator(0.0, 1.0)
    with pytest.raises(ValueError):
        iterated_lhs("sideways-copson", box, box, box, 2.0, 2.0)
