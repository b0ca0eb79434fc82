"""Exactness of the non-increasing rearrangement on step functions."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardylab.rearrangement import StepFn, distribution, double_star, rearrange


def _random_step(draw_lengths, draw_values):
    edges = np.concatenate([[0.0], np.cumsum(draw_lengths)])
    return StepFn(edges, np.asarray(draw_values))


@st.composite
def step_functions(draw, n_min=1, n_max=10):
    n = draw(st.integers(n_min, n_max))
    lengths = draw(st.lists(st.floats(0.05, 3.0), min_size=n, max_size=n))
    values = draw(st.lists(st.floats(0.0, 8.0), min_size=n, max_size=n))
    return _random_step(lengths, values)


@given(step_functions())
@settings(max_examples=60, deadline=None)
def test_rearrangement_is_non_increasing_and_equimeasurable(f):
    fstar = rearrange(f)
    vals = fstar.step.values
    assert np.all(np.diff(vals) < 0.0) or len(vals) <= 1
    # same total mass, exactly
    assert fstar.step.integral() == pytest.approx(f.integral(), abs=1e-12,
                                                  rel=1e-12)
    # same distribution function at every level actually taken
    for lam in set(float(v) for v in f.values):
        assert distribution(fstar.step, lam) == pytest.approx(
            distribution(f, lam), abs=1e-12)


@given(step_functions(), step_functions())
@settings(max_examples=60, deadline=None)
def test_hardy_littlewood_pairing(f, g):
    fstar, gstar = rearrange(f), rearrange(g)
    hi = min(f.edges[-1], g.edges[-1])
    edges = np.union1d(f.edges, g.edges)
    edges = edges[edges <= hi]
    mids = 0.5 * (edges[:-1] + edges[1:])
    pair = float(np.dot(f(mids) * g(mids), np.diff(edges)))
    se = np.union1d(fstar.step.edges, gstar.step.edges)
    se = se[se <= min(fstar.step.edges[-1], gstar.step.edges[-1])]
    sm = 0.5 * (se[:-1] + se[1:])
    spair = float(np.dot(fstar.step(sm) * gstar.step(sm), np.diff(se)))
    assert pair <= spair + 1e-12 * max(spair, 1.0)


def test_rearrange_known_example():
    f = StepFn(np.array([0.0, 1.0, 2.0, 3.0]), np.array([1.0, 3.0, 2.0]))
    fstar = rearrange(f)
    assert np.allclose(fstar.step.values, [3.0, 2.0, 1.0])
    assert np.allclose(fstar.step.edges, [0.0, 1.0, 2.0, 3.0])


def test_double_star_dominates_and_averages():
    fstar = rearrange(StepFn(np.array([0.0, 1.0]), np.array([1.0])))
    fss = double_star(fstar)
    assert float(fss(0.5)) == pytest.approx(1.0)
    assert float(fss(2.0)) == pytest.approx(0.5)   # (1/t) * total mass
    ts = np.geomspace(0.1, 10.0, 21)
    assert np.all(np.asarray(fss(ts)) >= np.asarray(fstar(ts)) - 1e-12)


def test_step_fn_validation():
    with pytest.raises(ValueError):
        StepFn(np.array([0.0, 1.0, 1.0]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        StepFn(np.array([0.0, 1.0]), np.array([np.inf]))
