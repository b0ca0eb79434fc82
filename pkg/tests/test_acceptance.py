"""Acceptance gate: the package-level guarantees, at their stated
tolerances and runtime budgets.

Each test is one criterion.  Where the verification suite already runs the
exact experiment (same instance counts, same tolerances) the test drives it
through :func:`hardylab.cli.run_checks`; the remaining criteria are spelled
out directly.
"""
import math
import time

import numpy as np
import pytest

from hardylab.axis import PiecewiseFn, make_log_grid
from hardylab.cli import (_oracle_instances, _power_weight,
                          _random_step_weight, _seg_w, run_checks)
from hardylab.constants import (ExponentSet, eval_aux2, eval_aux3, eval_gks,
                                eval_krepick, eval_maximal_norm, eval_thm33,
                                eval_thm34)
from hardylab.oracle import check_ibp
from hardylab.rearrangement import StepFn, rearrange
from hardylab.weights import as_weight, derive_v012

_INF = math.inf


def _single(name, seed=0):
    (res,) = run_checks([name], seed=seed)
    return res


# -- 1. duality-transport exactness ---------------------------------------


def test_criterion_1_sinnamon_transfer_exact_and_fast():
    t0 = time.perf_counter()
    res = _single("sinnamon-transfer")
    elapsed = time.perf_counter() - t0
    assert res["passed"], res["detail"]
    assert elapsed < 10.0, f"took {elapsed:.1f}s"


# -- 2. rearrangement suite ------------------------------------------------


def _distribution(step):
    """(sorted values desc, lengths) giving the distribution of a StepFn."""
    order = np.argsort(-step.values, kind="stable")
    return step.values[order], step.lengths[order]


def test_criterion_2_rearrangement_properties():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        n = int(rng.integers(2, 10))
        edges = np.concatenate([[0.0], np.cumsum(rng.uniform(0.05, 2.0, n))])
        vals = rng.uniform(0.0, 5.0, n)
        f = StepFn(edges, vals)
        fstar = rearrange(f).step
        # idempotence
        again = rearrange(fstar).step
        assert np.array_equal(again.values, fstar.values)
        assert np.allclose(again.lengths, fstar.lengths, rtol=0, atol=0)
        # homogeneity (exact: rearrangement only permutes values)
        c = float(rng.uniform(0.1, 4.0))
        scaled = rearrange(StepFn(edges, c * vals)).step
        assert np.array_equal(scaled.values, c * fstar.values)
        # equimeasurability: identical distributions
        dv, dl = _distribution(f)
        sv, sl = _distribution(fstar)
        assert np.array_equal(np.repeat(dv, 1), np.repeat(sv, 1)) or \
            np.array_equal(dv, sv)
        assert np.allclose(dl, sl, rtol=0, atol=1e-15)


def _pair(a, b):
    hi = min(float(a.edges[-1]), float(b.edges[-1]))
    edges = np.union1d(a.edges, b.edges)
    edges = edges[edges <= hi]
    mids = 0.5 * (edges[:-1] + edges[1:])
    return float(np.dot(a(mids) * b(mids), np.diff(edges)))


def test_criterion_2_hardy_littlewood():
    rng = np.random.default_rng(43)
    for _ in range(1000):
        n = int(rng.integers(2, 10))
        edges = np.concatenate([[0.0], np.cumsum(rng.uniform(0.05, 2.0, n))])
        f = StepFn(edges, rng.uniform(0.0, 5.0, n))
        g = StepFn(edges, rng.uniform(0.0, 5.0, n))
        pair = float(np.dot(f.values * g.values, f.lengths))
        spair = _pair(rearrange(f).step, rearrange(g).step)
        assert pair <= spair + 1e-12 * max(spair, 1.0)


# -- 3. closed-form constants ---------------------------------------------


def test_criterion_3_gks_closed_form():
    exp = ExponentSet.core(m=2.0, p=2.0, q=2.0)
    u = _power_weight(1.0, -2.0)
    v = as_weight(PiecewiseFn.constant(1.0))
    w = as_weight(PiecewiseFn.from_callable(
        lambda s: (1.0 + np.asarray(s, dtype=float)) ** -3.0, (1.0,),
        0.0, -3.0))
    rep = eval_gks("a", exp, u, v, w)
    assert rep.term("D1").value == pytest.approx(0.70711, abs=1e-4)


def test_criterion_3_krepick_closed_form():
    exp = ExponentSet.core(m=2.0, p=2.0, q=2.0)
    u = as_weight(PiecewiseFn.indicator(0.0, 1.0))
    v = as_weight(PiecewiseFn.from_callable(
        lambda s: np.exp(np.minimum(np.asarray(s, dtype=float), 700.0)),
        (), 0.0, 100.0))
    rep = eval_krepick("a", exp, u, v, u)
    assert rep.term("E1").value == pytest.approx(0.42888, abs=1e-4)


# -- 4. derived-weight closed form ----------------------------------------


def test_criterion_4_derived_weights():
    v = as_weight(PiecewiseFn.power(-1.5))
    dw = derive_v012(v, 2.0, 2.0)
    ts = np.geomspace(1e-4, 1e4, 257)
    assert np.max(np.abs(np.asarray(dw.v0(ts)) / 4.0 - 1.0)) < 1e-6
    assert np.max(np.abs(np.asarray(dw.v1(ts))
                         / (4.0 * np.sqrt(ts)) - 1.0)) < 1e-6
    assert np.max(np.abs(np.asarray(dw.v2(ts))
                         / (ts ** -0.5 / 16.0) - 1.0)) < 1e-6


# -- 5. homogeneity of every evaluator ------------------------------------


def _scale_instances(rng):
    """(label, eval(v, w), outer exponent, inner exponent) quadruples."""
    out = []
    for _ in range(5):
        p = float(rng.uniform(1.6, 2.0))
        m, q = float(rng.uniform(p, 2.6)), float(rng.uniform(p, 2.6))
        exp = ExponentSet.core(m=m, p=p, q=q)
        u = _power_weight(1.0, float(rng.uniform(-2.4, -1.6)))
        out.append(("gks", lambda v, w, e=exp, u=u:
                    eval_gks("a", e, u, v, w), q, p,
                    _power_weight(1.0, -0.5), _seg_w()))
        uk = as_weight(PiecewiseFn.indicator(0.0, 1.0))
        out.append(("krepick", lambda v, w, e=exp, u=uk:
                    eval_krepick("a", e, u, v, w), q, p,
                    _power_weight(1.0, p), uk))
        pa, qa = float(rng.uniform(1.8, 2.2)), float(rng.uniform(2.2, 2.8))
        ua = _power_weight(1.0, float(rng.uniform(-0.4, -0.2)))
        aa = as_weight(PiecewiseFn.constant(1.0))
        out.append(("aux2", lambda v, w, u=ua, a=aa, pa=pa, qa=qa:
                    eval_aux2(0.5, pa, qa, u, a, v, w), qa, pa,
                    _power_weight(1.0, 0.5), _seg_w()))
        out.append(("aux3", lambda v, w, u=ua, a=aa, pa=pa, qa=qa:
                    eval_aux3(0.5, pa, qa, u, a, v, w), qa, pa,
                    _power_weight(1.0, pa + 0.2), _seg_w()))
        e33 = ExponentSet.core(m=1.5, p=2.0, q=3.0,
                               r=float(rng.uniform(2.2, 2.8)))
        u33 = _power_weight(1.0, float(rng.uniform(0.1, 0.3)))
        b33 = as_weight(PiecewiseFn.constant(1.0))
        out.append(("thm33", lambda v, w, e=e33, u=u33, b=b33:
                    eval_thm33(e, u, b, v, w), e33.q, e33.m,
                    _power_weight(1.0, -1.4), _seg_w()))
        e34 = ExponentSet.core(m=1.5, p=2.5, q=3.0,
                               r=float(rng.uniform(1.6, 1.9)))
        u34 = _power_weight(1.0, float(rng.uniform(0.03, 0.08)))
        out.append(("thm34", lambda v, w, e=e34, u=u34, b=b33:
                    eval_thm34("i", e, u, b, v, w), e34.q, e34.m,
                    _power_weight(1.0, -1.22), _seg_w()))
        alpha = float(rng.uniform(1.1, 1.4))
        m1 = alpha * float(rng.uniform(1.3, 1.6))
        p1 = m1 * float(rng.uniform(1.2, 1.4))
        p2 = p1 * float(rng.uniform(1.05, 1.2))
        m2 = p2 * float(rng.uniform(1.1, 1.3))
        bb = _power_weight(1.0, 0.5)
        phi = _power_weight(1.0, 0.8 / alpha)
        out.append(("maximal", lambda v, w, a=alpha, b=bb, f=phi,
                    e=(p1, m1, p2, m2):
                    eval_maximal_norm("thm41", a, e[0], e[1], e[2], e[3],
                                      b, f, v, w), m2, m1,
                    _power_weight(1.0, -1.4), _seg_w()))
    return out


def test_criterion_5_homogeneity_every_evaluator():
    rng = np.random.default_rng(7)
    for label, ev, outer, inner, v, w in _scale_instances(rng):
        base = ev(v, w)
        assert all(t.value < _INF for t in base.terms), label
        for lam in (0.25, 9.0):
            sw = ev(v, as_weight(w.scaled(lam)))
            sv = ev(as_weight(v.scaled(lam)), w)
            for t0, tw, tv in zip(base.terms, sw.terms, sv.terms):
                assert tw.value == pytest.approx(
                    t0.value * lam ** (1.0 / outer), rel=1e-12,
                    abs=1e-300), (label, t0.name, lam)
                assert tv.value == pytest.approx(
                    t0.value * lam ** (-1.0 / inner), rel=1e-12,
                    abs=1e-300), (label, t0.name, lam)


# -- 6. maximal-operator reduction identity -------------------------------


def _maximal_exponents(regime, rng):
    alpha = float(rng.uniform(1.1, 1.4))
    if regime == "thm41":
        m1 = alpha * float(rng.uniform(1.3, 1.6))
        p1 = m1 * float(rng.uniform(1.2, 1.4))
        p2 = p1 * float(rng.uniform(1.05, 1.2))
        m2 = p2 * float(rng.uniform(1.1, 1.3))
    elif regime == "thm42(i)":
        m1 = alpha * float(rng.uniform(1.2, 1.4))
        p2 = m1 * float(rng.uniform(1.05, 1.2))
        p1 = p2 * float(rng.uniform(1.05, 1.2))
        m2 = p1 * float(rng.uniform(1.0, 1.15))
    else:
        m1 = alpha * float(rng.uniform(1.2, 1.4))
        p2 = m1 * float(rng.uniform(1.05, 1.2))
        m2 = p2 * float(rng.uniform(1.05, 1.2))
        p1 = m2 * float(rng.uniform(1.05, 1.2))
    return alpha, p1, m1, p2, m2


@pytest.mark.parametrize("regime", ["thm41", "thm42(i)", "thm42(ii)"])
def test_criterion_6_reduction_identity(regime):
    from hardylab.constants import reduce_maximal
    rng = np.random.default_rng(11)
    b = _power_weight(1.0, 0.5)
    v, w = _power_weight(1.0, -1.22), _seg_w()
    for _ in range(5):
        alpha, p1, m1, p2, m2 = _maximal_exponents(regime, rng)
        phi = _power_weight(1.0, 0.8 / alpha)
        rep = eval_maximal_norm(regime, alpha, p1, m1, p2, m2, b, phi, v, w)
        core_exp = ExponentSet.maximal(alpha, p1, m1, p2, m2)
        u, bb = reduce_maximal(alpha, b, phi)
        if regime == "thm41":
            core = eval_thm33(core_exp, as_weight(u), bb, v, w)
        else:
            case = "i" if regime == "thm42(i)" else "ii"
            core = eval_thm34(case, core_exp, as_weight(u), bb, v, w)
        for t, d in zip(rep.terms, core.terms):
            expect = d.value ** (1.0 / alpha)
            if not math.isfinite(expect):
                assert t.value == expect, (regime, t.name)
            else:
                assert t.value == pytest.approx(expect, rel=1e-12,
                                                abs=1e-300), (regime, t.name)


# -- 7. oracle two-sided brackets -----------------------------------------


def test_criterion_7_oracle_brackets():
    t0 = time.perf_counter()
    res = _single("oracle-brackets")
    elapsed = time.perf_counter() - t0
    assert res["passed"], res["detail"]
    assert elapsed < 180.0, f"took {elapsed:.1f}s"


# -- 8. gluing lemma -------------------------------------------------------


def test_criterion_8_gluing():
    res = _single("gluing")
    assert res["passed"], res["detail"]


# -- 9. integration by parts ----------------------------------------------


def test_criterion_9_integration_by_parts():
    rng = np.random.default_rng(17)
    grid = make_log_grid(1e-6, 1e6, 513)
    for _ in range(100):
        g = _random_step_weight(rng, n=6)
        s = float(rng.uniform(0.5, 20.0))
        a1, a2 = check_ibp(0.0, g, PiecewiseFn.indicator(0.0, s), grid)
        assert abs(a1 - a2) <= 1e-12 * max(abs(a2), 1.0)
        c = float(rng.uniform(0.1, 3.0))
        f = PiecewiseFn.from_callable(
            lambda t, c=c: np.exp(-c * np.asarray(t, dtype=float)), (),
            0.0, -100.0)
        for alpha in (1.0, 2.0):
            a1, a2 = check_ibp(alpha, g, f, grid)
            if a2 > 0.0:
                assert 1.0 / (alpha + 2.0) <= a1 / a2 <= alpha + 2.0


# -- 10. grid convergence --------------------------------------------------


def test_criterion_10_grid_convergence():
    g1 = make_log_grid(1e-8, 1e8, 4096)
    g2 = make_log_grid(1e-8, 1e8, 8192)
    for theorem in ("thm33", "thm34", "thm34ii"):
        case = "ii" if theorem == "thm34ii" else "i"
        for k, (kind, exp, ws, formula) in enumerate(
                _oracle_instances(theorem, 0)):
            if theorem == "thm33":
                r1 = eval_thm33(exp, ws["u"], ws["b"], ws["v"], ws["w"], g1)
                r2 = eval_thm33(exp, ws["u"], ws["b"], ws["v"], ws["w"], g2)
            else:
                r1 = eval_thm34(case, exp, ws["u"], ws["b"], ws["v"],
                                ws["w"], g1)
                r2 = eval_thm34(case, exp, ws["u"], ws["b"], ws["v"],
                                ws["w"], g2)
            for t1, t2 in zip(r1.terms, r2.terms):
                denom = max(abs(t1.value), 1e-300)
                assert abs(t2.value - t1.value) / denom < 5e-3, \
                    (theorem, k, t1.name)


# -- 11. full verification suite ------------------------------------------


def test_criterion_11_full_verify_under_budget():
    t0 = time.perf_counter()
    results = run_checks(seed=0)
    elapsed = time.perf_counter() - t0
    failed = [r for r in results if not r["passed"]]
    assert not failed, failed
    assert len(results) >= 12
    assert elapsed < 300.0, f"took {elapsed:.1f}s"
