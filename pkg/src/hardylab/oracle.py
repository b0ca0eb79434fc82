"""Brute-force oracles: independent lower bounds and two-sided lemma checks.

Everything here is deliberately independent of the closed-form machinery in
``constants``: ratios are maximized over explicit families of test
functions, transfer/gluing/integration-by-parts identities are evaluated by
direct quadrature on both sides, and the associate norm is bounded from
below by explicit pairings.  Agreement is judged against recorded empirical
brackets, never assumed.

Greedy transport (``oracle_sinnamon``): on step data the constraint set
``{g >= 0 : int_0^x g <= int_0^x f for all x}`` is a polymatroid, so serving
the cells in decreasing order of the (discrete) non-increasing envelope of
``w`` and granting each the largest mass the prefix constraints allow is
optimal; the optimum equals ``int f * env_w`` exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .axis import GridAxis, Mesh, PiecewiseFn, integrate, make_log_grid
from .functionals import norm_GG
from .operators import (MonotoneEnvelope, iterated_lhs, running_sup_right,
                        stieltjes_vs_envelope, _tail_limit)
from .rearrangement import RearrangedFn, StepFn, rearrange
from .weights import primitive_B

__all__ = ["TestFamily", "OracleResult", "oracle_sinnamon", "oracle_ratio",
           "check_gluing", "check_ibp", "oracle_assoc_norm",
           "INEQUALITY_KINDS"]

_INF = math.inf

#: inequality identifiers accepted by :func:`oracle_ratio`; the ``dual-*``
#: entries map onto the four iterated Hardy/Copson compositions
INEQUALITY_KINDS = ("main", "restricted-aux2", "restricted-aux3",
                    "dual-(2.5)", "dual-(2.6)", "dual-(2.7)", "dual-(2.8)")

_DUAL_MAP = {
    "dual-(2.5)": "inner-copson",
    "dual-(2.6)": "outer-copson",
    "dual-(2.7)": "double-copson",
    "dual-(2.8)": "double-hardy",
}


# --------------------------------------------------------------------------
# test-function families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TestFamily:
    """Deterministic family of nonnegative candidate step functions.

    Three generator kinds: sharp indicators ``chi_[0,s)``, power caps
    ``min(1, (t/s)^gamma)`` sampled on the family's log grid, and random
    step mixes drawn from a per-candidate generator so results do not
    depend on evaluation order.  All candidates live on (subsets of) the
    edges returned by :meth:`edges`, which keeps quadrature exact once the
    edges are folded into the mesh.
    """

    __test__ = False  # keep pytest from collecting this as a test class

    s_min: float = 1.0 / 64.0
    s_max: float = 64.0
    n_cells: int = 24
    n_scales: int = 7
    gammas: tuple = (0.25, 0.5, 1.0, 2.0, 4.0)
    n_random: int = 32
    seed: int = 0

    def edges(self) -> np.ndarray:
        return np.geomspace(self.s_min, self.s_max, self.n_cells + 1)

    def scales(self) -> np.ndarray:
        return np.geomspace(self.s_min * 2.0, self.s_max / 2.0, self.n_scales)

    def _cap(self, s: float, gamma: float) -> StepFn:
        e = self.edges()
        mids = np.sqrt(e[:-1] * e[1:])
        vals = np.minimum(1.0, (s / mids) ** gamma)
        return StepFn(e, vals)

    def candidates(self):
        """Yield ``(descriptor, StepFn)`` pairs in a fixed, seed-stable order."""
        e = self.edges()
        for s in self.scales():
            k = int(np.searchsorted(e, s * (1.0 + 1e-12)))
            k = min(max(k, 1), len(e) - 1)
            vals = np.zeros(len(e) - 1)
            vals[:k] = 1.0
            yield {"kind": "indicator", "s": float(e[k])}, StepFn(e, vals)
        for gamma in self.gammas:
            for s in self.scales():
                yield ({"kind": "cap", "gamma": float(gamma), "s": float(s)},
                       self._cap(float(s), float(gamma)))
        for idx in range(self.n_random):
            rng = np.random.default_rng([self.seed, idx])
            n_lv = int(rng.integers(2, 6))
            vals = np.zeros(len(e) - 1)
            pos = rng.choice(len(vals), size=n_lv, replace=False)
            vals[pos] = rng.uniform(0.1, 10.0, size=n_lv)
            yield {"kind": "steps", "index": idx}, StepFn(e, vals)


@dataclass
class OracleResult:
    """Best ratio found, with a replayable descriptor and search trace."""

    best: float
    best_descriptor: dict
    evaluations: int
    trace: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"schema": 1, "best": self.best,
                "best_descriptor": self.best_descriptor,
                "evaluations": self.evaluations,
                "trace": [[int(n), float(v)] for n, v in self.trace]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=True)


# --------------------------------------------------------------------------
# Sinnamon transfer formula
# --------------------------------------------------------------------------


def oracle_sinnamon(f: PiecewiseFn, w: PiecewiseFn,
                    grid: GridAxis) -> tuple[float, float]:
    """Both sides of the prefix-constrained duality on the discrete grid.

    ``rhs`` integrates ``f`` against the discrete non-increasing envelope
    of ``w``; ``lhs`` solves the transport problem
    ``sup { int g w : g >= 0, int_0^x g <= int_0^x f }`` greedily on the
    grid cells.  The two agree to rounding error on step data.
    """
    mesh = Mesh(grid, fns=[f, w])
    # the head interval [0, x_0) participates as an ordinary cell so that
    # mass sitting below the first grid node is neither lost nor stuck
    lens = np.concatenate([[float(mesh.x[0])], np.diff(mesh.x)])
    fm = np.concatenate([[mesh.head(f)], mesh.cell_masses(f)])
    wbar = np.concatenate([[mesh.head(w)], mesh.cell_masses(w)]) / lens
    env = running_sup_right(wbar, 0.0)
    rhs = float(np.dot(fm, env))
    # greedy transport: serve cells in decreasing w order; each may absorb
    # at most the minimum prefix slack over all points at or after it
    avail = np.cumsum(fm)            # prefix slack through each cell
    order = np.argsort(-wbar, kind="stable")
    lhs = 0.0
    for i in order:
        cap = float(np.min(avail[i:]))
        if cap > 0.0:
            lhs += cap * float(wbar[i])
            avail[i:] -= cap
    return lhs, rhs


# --------------------------------------------------------------------------
# ratio maximization
# --------------------------------------------------------------------------


def _step_pf(step: StepFn) -> PiecewiseFn:
    return PiecewiseFn.from_callable(
        lambda t: step(t), breakpoints=tuple(step.edges[step.edges > 0.0]),
        tail0=0.0, tailinf=0.0)


def _step_rhs_Lp(step: StepFn, p: float, v: PiecewiseFn,
                 shift: float = 0.0) -> float:
    """``(int step(s-shift)^p v(s) ds)^(1/p)``, exact over the step cells."""
    raw = 0.0
    for lo, hi, val in zip(step.edges[:-1], step.edges[1:], step.values):
        if val > 0.0:
            raw += val ** p * integrate(v, lo + shift, hi + shift)
    return raw ** (1.0 / p)


class _MainRatio:
    """LHS/RHS for the unrestricted inequality for the supremum operator."""

    def __init__(self, exp, u, b, v, w, mesh):
        self.exp, self.u, self.b, self.v, self.w = exp, u, b, v, w
        self.mesh = mesh
        self.B = np.asarray(primitive_B(b)(mesh.x))
        self.u_nodes = np.asarray(u(mesh.x), dtype=float)
        self.w_cells = mesh.cell_masses(w)
        self.v_cells = mesh.cell_masses(v)
        self.tail_w = mesh.tail(w)
        self.tail_v = mesh.tail(v)
        # prefix integrals grow linearly near zero, so the head pieces pair
        # t^power with the outer weight (the weight alone may not be
        # integrable at zero even when the full integrand is)
        x0 = float(mesh.x[0])
        qr = exp.q / exp.r
        mp = exp.m / exp.p
        self.head_w_pow = integrate(PiecewiseFn.power(qr) * w, 0.0, x0)
        self.head_v_pow = integrate(PiecewiseFn.power(mp) * v, 0.0, x0)
        self.dx = np.diff(mesh.x)
        self.u_lim, _ = _tail_limit(u, float(mesh.x[-1]))

    def __call__(self, step: StepFn) -> float:
        exp, mesh = self.exp, self.mesh
        fstar = rearrange(step)
        g = fstar.as_piecewise()
        inner = mesh.cum0(g * self.b)
        with np.errstate(invalid="ignore", divide="ignore"):
            prof = self.u_nodes * inner / self.B
        prof = np.where(np.isfinite(prof), prof, 0.0)
        lim = float(prof[-1]) if self.u_lim > 0.0 else 0.0
        env = running_sup_right(prof, lim)
        tr = env ** exp.r
        cum_r = Mesh.cum0_from_cells(0.5 * (tr[:-1] + tr[1:]) * self.dx,
                                     head=tr[0] * float(mesh.x[0]))
        qr = exp.q / exp.r
        raw = float(np.sum(mesh.cells_weighted(cum_r ** qr, self.w_cells)))
        raw += env[0] ** (exp.r * qr) * self.head_w_pow
        raw += self.tail_w * cum_r[-1] ** qr
        lhs = raw ** (1.0 / exp.q)
        # RHS: prefix p-means of f* against v, with the prefix exact on steps
        sf = fstar.step
        cum = np.concatenate([[0.0],
                              np.cumsum(sf.lengths * sf.values ** exp.p)])
        idx = np.clip(np.searchsorted(sf.edges, mesh.x, side="right") - 1,
                      0, len(sf.values) - 1)
        phi = cum[idx] + sf.values[idx] ** exp.p * (
            np.minimum(mesh.x, sf.edges[-1]) - sf.edges[idx])
        phi = np.where(mesh.x >= sf.edges[-1], cum[-1], phi)
        mp = exp.m / exp.p
        raw = float(np.sum(mesh.cells_weighted(phi ** mp, self.v_cells)))
        raw += sf.values[0] ** (exp.p * mp) * self.head_v_pow
        raw += self.tail_v * cum[-1] ** mp
        rhs = raw ** (1.0 / exp.m)
        return _ratio(lhs, rhs)


class _DualRatio:
    """LHS/RHS for one of the four dual iterated compositions."""

    def __init__(self, kind, exp, u, v, w, mesh):
        self.kind, self.exp = kind, exp
        self.u, self.v, self.w, self.mesh = u, v, w, mesh

    def __call__(self, step: StepFn) -> float:
        h = _step_pf(step)
        lhs = iterated_lhs(self.kind, h, self.u, self.w,
                           self.exp.m, self.exp.q, mesh=self.mesh)
        rhs = _step_rhs_Lp(step, self.exp.p, self.v)
        return _ratio(lhs, rhs)


class _RestrictedRatio:
    """LHS/RHS for the restricted inequalities on (t, inf).

    variant "aux2" pairs the envelope with the prefix integral of the test
    function from t; "aux3" pairs it with the suffix integral.
    """

    def __init__(self, variant, t, p, q, u, a, v, w, family):
        self.variant, self.t = variant, float(t)
        self.p, self.q = float(p), float(q)
        self.v = v
        e = family.edges()
        z = np.geomspace(e[0] / 64.0, e[-1] * 64.0, 385)
        z = np.unique(np.concatenate([z, e]))
        self.y = self.t + z
        self.u_nodes = np.asarray(u(self.y), dtype=float)
        self.u_lim, _ = _tail_limit(u, float(self.y[-1]))
        self.a_cells = np.array([integrate(a, lo, hi)
                                 for lo, hi in zip(self.y[:-1], self.y[1:])])
        self.w_cells = np.array([integrate(w, lo, hi)
                                 for lo, hi in zip(self.y[:-1], self.y[1:])])
        self.tail_w = integrate(w, float(self.y[-1]), _INF)

    def __call__(self, step: StepFn) -> float:
        z = self.y - self.t
        cum = np.concatenate([[0.0], np.cumsum(step.lengths * step.values)])
        idx = np.clip(np.searchsorted(step.edges, z, side="right") - 1,
                      0, len(step.values) - 1)
        F = cum[idx] + step(z) * (np.minimum(z, step.edges[-1])
                                  - step.edges[idx])
        F = np.where(z >= step.edges[-1], cum[-1], F)
        if self.variant == "aux3":
            F = cum[-1] - F
        with np.errstate(invalid="ignore"):
            prof = self.u_nodes * F
        prof = np.where(np.isfinite(prof), prof, 0.0)
        lim = float(prof[-1]) if (self.u_lim > 0.0
                                  and self.variant == "aux2") else 0.0
        env = running_sup_right(prof, lim)
        G = Mesh.cum0_from_cells(0.5 * (env[:-1] + env[1:]) * self.a_cells,
                                 head=0.0)
        raw = float(np.sum(0.5 * (G[:-1] ** self.q + G[1:] ** self.q)
                           * self.w_cells))
        raw += self.tail_w * G[-1] ** self.q
        lhs = raw ** (1.0 / self.q)
        rhs = _step_rhs_Lp(step, self.p, self.v, shift=self.t)
        return _ratio(lhs, rhs)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        return _INF if lhs > 0.0 else 0.0
    return lhs / rhs


def _golden_max(fun, lo: float, hi: float, evals: int) -> tuple[float, float]:
    """Golden-section maximization of ``fun`` over log-parameter space."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = fun(math.exp(c)), fun(math.exp(d))
    best_x, best = (c, fc) if fc >= fd else (d, fd)
    for _ in range(max(evals - 2, 0)):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = fun(math.exp(d))
            if fd > best:
                best_x, best = d, fd
        else:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = fun(math.exp(c))
            if fc > best:
                best_x, best = c, fc
    return math.exp(best_x), best


def oracle_ratio(inequality: str, exponents, weights: dict,
                 family: TestFamily | None = None, budget: int = 400,
                 t: float = 0.0) -> OracleResult:
    """Best LHS/RHS ratio over the family, a lower bound for the constant.

    ``weights`` carries the weight functions by role: ``u, b, v, w`` for
    the unrestricted inequality, ``u, a, v, w`` for the restricted ones,
    ``u, v, w`` for the dual compositions.  The search spends the budget in
    three phases: family sweep, multiplicative coordinate search on the
    best candidate's step heights (x2 / x0.5 moves, at most 20 passes), and
    golden-section refinement of the best single-parameter candidate.
    """
    if inequality not in INEQUALITY_KINDS:
        raise ValueError(f"unknown inequality kind {inequality!r}")
    if family is None:
        family = TestFamily()
    exp = exponents
    edges = family.edges()
    if inequality == "main":
        mesh = Mesh(make_log_grid(defaults.GRID_T_MIN, defaults.GRID_T_MAX,
                                  513),
                    fns=[weights["u"], weights["b"], weights["v"],
                         weights["w"]],
                    extra_points=edges)
        evaluate = _MainRatio(exp, weights["u"], weights["b"], weights["v"],
                              weights["w"], mesh)
    elif inequality.startswith("dual-"):
        mesh = Mesh(make_log_grid(defaults.GRID_T_MIN, defaults.GRID_T_MAX,
                                  513),
                    fns=[weights["u"], weights["w"]], extra_points=edges)
        evaluate = _DualRatio(_DUAL_MAP[inequality], exp, weights["u"],
                              weights["v"], weights["w"], mesh)
    else:
        variant = "aux2" if inequality.endswith("aux2") else "aux3"
        evaluate = _RestrictedRatio(variant, t, exp.p, exp.q, weights["u"],
                                    weights["a"], weights["v"], weights["w"],
                                    family)

    state = {"n": 0, "best": 0.0, "desc": {"kind": "none"}, "trace": []}

    def score(desc, step):
        state["n"] += 1
        r = evaluate(step)
        if r > state["best"]:
            state["best"] = r
            state["desc"] = desc
            state["step"] = step
            state["trace"].append((state["n"], r))
        return r

    for desc, step in family.candidates():
        if state["n"] >= budget:
            break
        score(desc, step)

    # phase 2: multiplicative coordinate moves on the best step heights
    if "step" in state and math.isfinite(state["best"]) and state["best"] > 0:
        base = state["step"]
        vals = base.values.copy()
        coord_budget = min(budget - state["n"], 20 * max(len(vals), 1))
        spent = 0
        for _ in range(20):
            improved = False
            for i in range(len(vals)):
                if spent + 2 > coord_budget:
                    break
                for fac in (2.0, 0.5):
                    trial = vals.copy()
                    trial[i] = vals[i] * fac if vals[i] > 0.0 else fac - 1.0
                    trial[i] = max(trial[i], 0.0)
                    prev = state["best"]
                    r = score({"kind": "local-search",
                               "base": state["desc"].get("kind", "steps"),
                               "values": [float(x) for x in trial]},
                              StepFn(base.edges, trial))
                    spent += 1
                    if r > prev:
                        vals = trial
                        improved = True
            if not improved or spent >= coord_budget:
                break

    # phase 3: golden-section on the indicator width
    remaining = budget - state["n"]
    if remaining >= 4:
        def fun(s):
            step = StepFn(np.array([0.0, float(s)]), np.array([1.0]))
            return score({"kind": "indicator-refined", "s": float(s)}, step)

        _golden_max(fun, float(edges[0] * 2.0), float(edges[-1]),
                    min(remaining, 16))

    return OracleResult(best=state["best"], best_descriptor=state["desc"],
                        evaluations=state["n"], trace=state["trace"])


# --------------------------------------------------------------------------
# gluing lemma
# --------------------------------------------------------------------------


def check_gluing(alpha: float, beta: float, a, g: PiecewiseFn,
                 h: PiecewiseFn, grid: GridAxis | None = None
                 ) -> tuple[float, float]:
    """Both sides of the two-weight gluing estimate, by direct quadrature.

    lhs couples g and h through the kernel weights a(x)/(a(x)+a(t)); rhs is
    the split into a prefix/suffix product plus a weighted dual product.
    """
    if alpha <= 0.0 or beta <= 0.0:
        raise ValueError("need alpha, beta > 0")
    if grid is None:
        grid = make_log_grid(defaults.GRID_T_MIN, defaults.GRID_T_MAX, 1025)
    mesh = Mesh(grid, fns=[a, g, h])
    an = np.asarray(a(mesh.x), dtype=float)
    g_cells = mesh.cell_masses(g)
    h_cells = mesh.cell_masses(h)
    head_g, tail_g = mesh.head(g), mesh.tail(g)
    head_h, tail_h = mesh.head(h), mesh.tail(h)
    a_lim, _ = _tail_limit(a, float(mesh.x[-1]))

    sup_idx = np.unique(np.linspace(0, mesh.n - 1, 257).astype(int))
    ax = an[sup_idx][:, None]
    at = an[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        rg = np.where(ax + at > 0.0, ax / (ax + at), 0.0) ** beta
        rh = np.where(ax + at > 0.0, at / (ax + at), 0.0) ** alpha
    L1 = 0.5 * (rg[:, :-1] + rg[:, 1:]) @ g_cells
    L2 = 0.5 * (rh[:, :-1] + rh[:, 1:]) @ h_cells
    axv = an[sup_idx]
    with np.errstate(invalid="ignore", divide="ignore"):
        rg0 = np.where(axv + an[0] > 0.0, axv / (axv + an[0]), 0.0) ** beta
        rh0 = np.where(axv + an[0] > 0.0, an[0] / (axv + an[0]), 0.0) ** alpha
        if math.isinf(a_lim):
            rgi = np.zeros_like(axv)
            rhi = np.ones_like(axv)
        else:
            rgi = np.where(axv + a_lim > 0.0, axv / (axv + a_lim), 0.0) ** beta
            rhi = np.where(axv + a_lim > 0.0, a_lim / (axv + a_lim), 1.0) ** alpha
    L1 += head_g * rg0 + tail_g * rgi
    L2 += head_h * rh0 + tail_h * rhi
    lhs = float(np.max(L1 ** (1.0 / beta) * L2 ** (1.0 / alpha)))

    Gc = Mesh.cum0_from_cells(g_cells, head=head_g)
    Hs = Mesh.cuminf_from_cells(h_cells, tail=tail_h)
    term1 = float(np.max(Gc ** (1.0 / beta) * Hs ** (1.0 / alpha)))
    with np.errstate(invalid="ignore", divide="ignore"):
        ab = np.where(an > 0.0, an ** (-beta), _INF)
    dual_g = Mesh.cuminf_from_cells(
        0.5 * (np.where(np.isfinite(ab[:-1]), ab[:-1], 0.0)
               + np.where(np.isfinite(ab[1:]), ab[1:], 0.0)) * g_cells,
        tail=0.0 if math.isinf(a_lim) else
        (a_lim ** (-beta) * tail_g if a_lim > 0.0 else 0.0))
    dual_h = Mesh.cum0_from_cells(
        0.5 * (an[:-1] ** alpha + an[1:] ** alpha) * h_cells,
        head=an[0] ** alpha * head_h)
    term2 = float(np.max(dual_g ** (1.0 / beta) * dual_h ** (1.0 / alpha)))
    return lhs, term1 + term2


# --------------------------------------------------------------------------
# integration by parts
# --------------------------------------------------------------------------


def check_ibp(alpha: float, g: PiecewiseFn, f: PiecewiseFn,
              grid: GridAxis | None = None) -> tuple[float, float]:
    """Both sides of the power-weighted integration-by-parts identity.

    A1 integrates ``(int_0^t g)^alpha g (f - f(inf))`` directly; A2 pays
    ``(int_0^t g)^(alpha+1)/(alpha+1) * (alpha+1)``-style mass against the
    decrements of ``f`` as a Stieltjes sum.  At alpha = 0 both reduce to
    Fubini on step data and agree exactly.
    """
    if alpha < 0.0:
        raise ValueError("need alpha >= 0")
    if grid is None:
        grid = make_log_grid(defaults.GRID_T_MIN, defaults.GRID_T_MAX, 1025)
    mesh = Mesh(grid, fns=[g, f])
    g_cells = mesh.cell_masses(g)
    head_g, tail_g = mesh.head(g), mesh.tail(g)
    Gc = mesh.cum0(g, cells=g_cells)
    f_inf, _ = _tail_limit(f, float(mesh.x[-1]))
    if not math.isfinite(f_inf):
        raise ValueError("f has no finite limit at infinity")
    lx = np.log(mesh.x)

    def Gpow(t, power):
        t = np.asarray(t, dtype=float)
        base = np.interp(np.log(np.clip(t, mesh.x[0], mesh.x[-1])), lx, Gc)
        base = np.where(t > mesh.x[-1], Gc[-1] + tail_g, base)
        return base ** power

    fv = np.asarray(f(mesh.x), dtype=float)
    glv = np.asarray(g(mesh._flat_t), dtype=float).reshape(mesh.gl_t.shape)
    flv = np.asarray(f(mesh._flat_t), dtype=float).reshape(mesh.gl_t.shape)
    if alpha == 0.0:
        gl_pow = np.ones_like(glv)
    else:
        gl_pow = Gpow(mesh.gl_t, alpha)
    A1 = float(np.sum(gl_pow * glv * (flv - f_inf) * mesh.gl_w))
    if head_g > 0.0 and fv[0] != f_inf:
        A1 += head_g * Gc[0] ** alpha * (fv[0] - f_inf)
    if tail_g > 0.0 and fv[-1] != f_inf:
        A1 += tail_g * (Gc[-1] + tail_g) ** alpha * (fv[-1] - f_inf)

    env = MonotoneEnvelope(x=mesh.x, values=np.minimum.accumulate(fv),
                           limit_inf=f_inf)
    A2 = stieltjes_vs_envelope(lambda t: Gpow(t, alpha + 1.0), env, 0.0, _INF)
    return A1, A2


# --------------------------------------------------------------------------
# associate norm
# --------------------------------------------------------------------------


def _pair_steps(a: StepFn, b: StepFn) -> float:
    """``int a*b`` for two step functions, exact via the merged partition."""
    hi = min(float(a.edges[-1]), float(b.edges[-1]))
    edges = np.union1d(a.edges, b.edges)
    edges = edges[edges <= hi]
    if len(edges) < 2:
        return 0.0
    mids = 0.5 * (edges[:-1] + edges[1:])
    return float(np.dot(a(mids) * b(mids), np.diff(edges)))


def oracle_assoc_norm(gstar: RearrangedFn, p: float, m: float, v,
                      family: TestFamily | None = None,
                      budget: int = 200) -> OracleResult:
    """Lower bound for the associate norm by explicit normalized pairings.

    Maximizes ``int f* g*`` over family members with their primal norm
    scaled to one; every candidate gives a certified lower bound.
    """
    if family is None:
        family = TestFamily()
    state = {"n": 0, "best": 0.0, "desc": {"kind": "none"}, "trace": []}
    for desc, step in family.candidates():
        if state["n"] >= budget:
            break
        state["n"] += 1
        fstar = rearrange(step)
        nrm = norm_GG(fstar, p, m, v).value
        if not (0.0 < nrm < _INF):
            continue
        r = _pair_steps(fstar.step, gstar.step) / nrm
        if r > state["best"]:
            state["best"], state["desc"] = r, desc
            state["trace"].append((state["n"], r))
    return OracleResult(best=state["best"], best_descriptor=state["desc"],
                        evaluations=state["n"], trace=state["trace"])
