"""Quadrature and function-representation tests for the axis module."""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from hardylab.axis import (GridAxis, Mesh, PiecewiseFn, integrate,
                           make_log_grid, sup_on)


def test_log_grid_endpoints_and_count():
    g = make_log_grid(1e-3, 1e3, 61)
    assert g.nodes[0] == pytest.approx(1e-3)
    assert g.nodes[-1] == pytest.approx(1e3)
    assert len(g.nodes) == 61
    assert np.all(np.diff(np.log(g.nodes)) > 0.0)


def test_grid_axis_rejects_bad_ranges():
    with pytest.raises(ValueError):
        GridAxis(1.0, 0.5, 10)
    with pytest.raises(ValueError):
        GridAxis(1.0, 2.0, 1)


def test_integrate_pure_power_closed_form():
    f = PiecewiseFn.power(-0.5)
    assert integrate(f, 0.0, 4.0) == pytest.approx(4.0, rel=1e-12)
    g = PiecewiseFn.power(-2.0)
    assert integrate(g, 1.0, math.inf) == pytest.approx(1.0, rel=1e-12)


def test_integrate_power_log_vs_scipy():
    f = PiecewiseFn.powlog(-1.5, 2.0, 2.0)
    ref, _ = quad(lambda t: t ** -1.5 * (1.0 + abs(math.log(t))) ** 2.0,
                  1.0, 50.0, limit=200)
    assert integrate(f, 1.0, 50.0) == pytest.approx(ref, rel=1e-9)


def test_integrate_indicator():
    f = PiecewiseFn.indicator(0.5, 2.5)
    assert integrate(f, 0.0, math.inf) == pytest.approx(2.0, rel=1e-12)
    assert integrate(f, 1.0, 2.0) == pytest.approx(1.0, rel=1e-12)


def test_mesh_cum0_matches_primitive():
    mesh = Mesh(make_log_grid(1e-4, 1e4, 129), fns=[PiecewiseFn.power(0.5)])
    cum = mesh.cum0(PiecewiseFn.power(0.5))
    ref = mesh.x ** 1.5 / 1.5
    assert np.max(np.abs(cum / ref - 1.0)) < 1e-12


def test_mesh_cuminf_matches_tail():
    f = PiecewiseFn.power(-3.0)
    mesh = Mesh(make_log_grid(1e-2, 1e4, 129), fns=[f])
    cum = mesh.cuminf(f)
    ref = mesh.x ** -2.0 / 2.0
    assert np.max(np.abs(cum / ref - 1.0)) < 1e-12


def test_mesh_includes_breakpoints():
    f = PiecewiseFn.indicator(0.0, 3.0)
    mesh = Mesh(make_log_grid(1e-2, 1e2, 65), fns=[f])
    assert np.any(np.isclose(mesh.x, 3.0))


def test_sup_on_power():
    f = PiecewiseFn.power(-1.0)
    assert sup_on(f, 2.0, math.inf) == pytest.approx(0.5, rel=1e-9)


def test_piecewise_segments_evaluate():
    f = PiecewiseFn.from_segments([(0.0, 1.0, 1.0, 2.0),
                                   (1.0, math.inf, 1.0, -6.0)])
    assert float(f(0.5)) == pytest.approx(0.25)
    assert float(f(2.0)) == pytest.approx(2.0 ** -6.0)
