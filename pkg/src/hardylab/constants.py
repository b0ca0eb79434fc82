"""Evaluators for the explicit best-constant characterizations.

Each public ``eval_*`` function computes, verbatim, the displayed right-hand
side of one characterization: the two iterated Hardy-type theorems (the
``D``- and ``E``-term suprema), the two shifted-interval supremum-operator
characterizations on ``(t, oo)``, the four-term and fourteen-term
characterizations of the restricted inequality, and the maximal-operator
norm obtained from them by exponent substitution.  Results are returned as
:class:`ConstantReport` objects carrying one :class:`TermValue` per
displayed term, with the supremum-attaining location and convergence flags.

Evaluation conventions
----------------------
* Suprema over the half line are taken over a fixed, grid-independent set
  of candidate locations (``defaults.SWEEP_COUNT`` log-uniform points plus
  all weight breakpoints), so refining the quadrature grid does not move
  the candidate set.  Doubly-indexed suprema add a deterministic local
  refinement around the best coarse candidate.
* ``0 * oo = 0``, ``0 / 0 = 0`` and ``oo / oo = 0`` throughout.
* Limits at infinity use a doubling check (value at ``t_max`` against
  ``t_max / 2``); unconverged tails flag the term instead of silently
  truncating it.
* Stieltjes integrals against envelope decrements with a closed endpoint
  at infinity are computed as ``env(x) - env(oo)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .axis import GridAxis, Mesh, PiecewiseFn, integrate, make_log_grid
from .weights import (WeightFn, check_delta2, check_nondegenerate, check_Qr,
                      check_quasi_increasing, derive_v012, primitive_B)

__all__ = [
    "ExponentSet", "TermValue", "ConstantReport", "RegimeError",
    "eval_gks", "eval_krepick", "eval_aux2", "eval_aux3",
    "eval_thm33", "eval_thm34", "reduce_maximal", "maximal_certificates",
    "eval_maximal_norm",
]

_INF = math.inf


class RegimeError(ValueError):
    """Exponents outside the regime a characterization is stated for."""


def _conj(x: float) -> float:
    return x / (x - 1.0)


@dataclass(frozen=True)
class ExponentSet:
    """Exponents (m, p, q) and optionally r, plus the maximal-operator set.

    The conjugates ``m_prime``/``p_prime`` satisfy 1/p + 1/p' = 1 exactly
    (they are computed, not stored).
    """

    m: float
    p: float
    q: float
    r: float | None = None
    alpha: float | None = None
    p1: float | None = None
    m1: float | None = None
    p2: float | None = None
    m2: float | None = None

    def __post_init__(self):
        for name in ("m", "p", "q"):
            val = getattr(self, name)
            if not (val > 0.0 and math.isfinite(val)):
                raise ValueError(f"exponent {name} must be positive, got {val}")

    @property
    def m_prime(self) -> float:
        return _conj(self.m)

    @property
    def p_prime(self) -> float:
        return _conj(self.p)

    @staticmethod
    def core(m: float, p: float, q: float, r: float | None = None) -> "ExponentSet":
        return ExponentSet(m=m, p=p, q=q, r=r)

    @staticmethod
    def maximal(alpha: float, p1: float, m1: float,
                p2: float, m2: float) -> "ExponentSet":
        """Core exponents induced by the maximal-operator substitution.

        The reduction turns the maximal-operator inequality with exponents
        (p1, m1, p2, m2) and inner exponent alpha into the supremum-operator
        inequality with every exponent divided by alpha.
        """
        if not (0.0 < alpha < m1):
            raise RegimeError("regime violation: requires 0 < alpha < m1")
        return ExponentSet(m=m1 / alpha, p=p1 / alpha, q=m2 / alpha,
                           r=p2 / alpha, alpha=alpha,
                           p1=p1, m1=m1, p2=p2, m2=m2)

    # -- regime validators -------------------------------------------------

    def require_case_ab(self, case: str) -> None:
        if case == "a":
            if not (self.p <= self.m and self.p <= self.q):
                raise RegimeError("regime violation: case a requires p <= m and p <= q")
        elif case == "b":
            if not (self.m < self.p <= self.q):
                raise RegimeError("regime violation: case b requires m < p <= q")
        else:
            raise ValueError(f"unknown case {case!r}; expected 'a' or 'b'")

    def require_thm33(self) -> None:
        if self.r is None:
            raise RegimeError("regime violation: r is required")
        if not (1.0 < self.m < self.p <= self.r < self.q < _INF):
            raise RegimeError("regime violation: requires 1 < m < p <= r < q")

    def require_thm34(self) -> None:
        if self.r is None:
            raise RegimeError("regime violation: r is required")
        if not (1.0 < self.m <= self.r < min(self.p, self.q) < _INF):
            raise RegimeError("regime violation: requires r < min{p,q} "
                              "(with 1 < m <= r)")


@dataclass
class TermValue:
    """One displayed term: its value, supremum location, and flags."""

    name: str
    value: float
    argsup: float | str | None = None
    flags: list = field(default_factory=list)

    @property
    def in_total(self) -> bool:
        return "informational" not in self.flags


@dataclass
class ConstantReport:
    theorem: str
    case: str
    grid: dict
    terms: list
    flags: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return float(sum(t.value for t in self.terms if t.in_total))

    def term(self, name: str) -> TermValue:
        for t in self.terms:
            if t.name == name:
                return t
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "theorem": self.theorem,
            "case": self.case,
            "grid": self.grid,
            "params": self.params,
            "terms": [
                {"name": t.name, "value": t.value, "argsup": t.argsup,
                 "flags": list(t.flags)}
                for t in self.terms
            ],
            "flags": list(self.flags),
            "total": self.total,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=True)


# --------------------------------------------------------------------------
# numeric helpers honoring the 0*oo conventions
# --------------------------------------------------------------------------


def _pw(a, e: float):
    """Power with the extended-real conventions (0^-e = oo, oo^-e = 0)."""
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out = np.power(a, e)
    return out


def _mul(a, b):
    """Product with 0 * oo = 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(invalid="ignore"):
        out = a * b
    zero = (a == 0.0) | (b == 0.0)
    if np.any(zero):
        out = np.where(zero, 0.0, out)
    return out


def _muls(*arrs):
    out = arrs[0]
    for a in arrs[1:]:
        out = _mul(out, a)
    return out


def _mul_s(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def _nz(a):
    """Resolve nan (arising from oo - oo differences) to 0."""
    a = np.asarray(a, dtype=float)
    return np.where(np.isnan(a), 0.0, a)


def _trap(vals: np.ndarray, cells: np.ndarray) -> float:
    """Trapezoid pairing of node values against exact cell masses."""
    if len(cells) == 0:
        return 0.0
    vals = _nz(vals)
    return float(np.sum(_mul(0.5 * (vals[:-1] + vals[1:]), cells)))


def _best(vals, xs) -> tuple[float, float]:
    vals = np.asarray(vals, dtype=float)
    vals = np.where(np.isnan(vals), 0.0, vals)
    if len(vals) == 0:
        return 0.0, 0.0
    j = int(np.argmax(vals))
    return float(vals[j]), float(np.asarray(xs)[j])


def _head_est(y0: float, y1: float, x0: float, x1: float) -> float:
    """Head mass of a node-sampled integrand assuming local power behavior."""
    if y0 == _INF or y1 == _INF:
        return _INF
    if not (y0 > 0.0 and y1 > 0.0):
        return 0.0
    k = math.log(y1 / y0) / math.log(x1 / x0)
    if k <= -1.0:
        return _INF
    return y0 * x0 / (k + 1.0)


def _tail_est(y0: float, y1: float, x0: float, x1: float) -> float:
    """Tail mass beyond x1 of a node-sampled integrand, power extrapolated."""
    if y1 == 0.0:
        return 0.0
    if not (y0 > 0.0 and math.isfinite(y1)):
        return _INF if y1 > 0.0 else 0.0
    k = math.log(y1 / y0) / math.log(x1 / x0)
    if k >= -1.0:
        return _INF
    return -y1 * x1 / (k + 1.0)


def _tail_corr(xs: np.ndarray, h: np.ndarray) -> float:
    """Tail mass beyond xs[-1] of the node-sampled integrand h.

    The decay exponent is read off between xs[-1]/2 and xs[-1]; if the
    sampled range does not reach back that far the correction is skipped
    (plain truncation), which avoids wild extrapolation from transients.
    """
    if len(xs) < 2 or xs[0] > xs[-1] / 8.0:
        return 0.0
    jm = min(int(np.searchsorted(xs, xs[-1] / 2.0)), len(xs) - 2)
    if xs[jm] > 0.6 * xs[-1]:
        return 0.0
    return _tail_est(float(h[jm]), float(h[-1]),
                     float(xs[jm]), float(xs[-1]))


def _node_limit(x: np.ndarray, vals: np.ndarray) -> tuple[float, bool]:
    """Limit of a node array as t -> oo, with a doubling convergence check."""
    j = min(int(np.searchsorted(x, x[-1] / 2.0)), len(x) - 2)
    a = float(vals[j])
    b = float(vals[-1])
    if not math.isfinite(b):
        return _INF, True
    if abs(b) <= 1e-3 * max(abs(a), 1e-300):
        return 0.0, True
    conv = abs(b - a) <= 1e-3 * max(abs(a), abs(b), 1e-300)
    if not conv and a > 0.0 and b > 10.0 * a and x[-1] / x[0] >= 16.0:
        return _INF, False
    return b, conv


def _running_sup_right(vals: np.ndarray, floor: float) -> np.ndarray:
    out = np.maximum.accumulate(vals[::-1])[::-1]
    if floor > 0.0:
        out = np.maximum(out, floor)
    return out


# --------------------------------------------------------------------------
# evaluation context: mesh + fixed supremum candidate set
# --------------------------------------------------------------------------


class EvalContext:
    """Shared mesh, cached cell masses, and the supremum candidate set."""

    def __init__(self, fns, grid: GridAxis | None = None, extra_points=()):
        self.axis = grid or make_log_grid(defaults.GRID_T_MIN,
                                          defaults.GRID_T_MAX,
                                          defaults.GRID_COUNT)
        self.mesh = Mesh(self.axis, fns=fns, extra_points=extra_points)
        self.x = self.mesh.x
        self.dx = np.diff(self.x)
        n = len(self.x)
        targets = np.geomspace(self.x[0], self.x[-1], defaults.SWEEP_COUNT)
        idx = set(int(i) for i in
                  np.clip(np.searchsorted(self.x, targets), 0, n - 1))
        for f in fns:
            for b in f.breakpoints:
                if self.x[0] <= b <= self.x[-1]:
                    j = int(np.searchsorted(self.x, b))
                    idx.update(k for k in (j - 1, j, j + 1) if 0 <= k < n)
        for p in extra_points:
            if self.x[0] <= p <= self.x[-1]:
                idx.add(int(np.clip(np.searchsorted(self.x, p), 0, n - 1)))
        self.sweep = np.array(sorted(idx), dtype=int)
        self.coarse = np.unique(np.append(self.sweep[::4], self.sweep[-1]))

    def grid_descriptor(self) -> dict:
        d = self.axis.describe() if hasattr(self.axis, "describe") else {}
        d = dict(d)
        d.update({"gl_order": defaults.GL_ORDER,
                  "sweep_count": int(len(self.sweep)),
                  "mesh_nodes": int(len(self.x))})
        return d

    def sup_refined(self, eval_at, cands: np.ndarray,
                    rounds: int = 2, fan: int = 8) -> tuple[float, int]:
        """Max of ``eval_at(node_index)`` over candidates, locally refined.

        Deterministic: after the coarse pass, each round inserts ``fan``
        node indices between the neighbors of the current argmax.
        """
        cands = np.asarray(cands, dtype=int)
        if len(cands) == 0:
            return 0.0, 0
        vals = np.array([eval_at(int(i)) for i in cands], dtype=float)
        vals = np.where(np.isnan(vals), 0.0, vals)
        k = int(np.argmax(vals))
        best_v, best_i = float(vals[k]), int(cands[k])
        lo = int(cands[max(k - 1, 0)])
        hi = int(cands[min(k + 1, len(cands) - 1)])
        for _ in range(rounds):
            if hi - lo <= 1:
                break
            news = np.unique(np.linspace(lo, hi, fan + 2).astype(int)[1:-1])
            for i in news:
                v = float(eval_at(int(i)))
                if not math.isnan(v) and v > best_v:
                    best_v, best_i = v, int(i)
            lo = max(best_i - max((hi - lo) // fan, 1), lo)
            hi = min(best_i + max((hi - lo) // fan, 1), hi)
        return best_v, best_i


def _base_report(theorem: str, case: str, ctx: EvalContext,
                 params: dict) -> ConstantReport:
    return ConstantReport(theorem=theorem, case=case,
                          grid=ctx.grid_descriptor(), terms=[],
                          params=params)


# --------------------------------------------------------------------------
# Theorem with the D-terms
# --------------------------------------------------------------------------


def eval_gks(case: str, exp: ExponentSet, u: PiecewiseFn, v: PiecewiseFn,
             w: PiecewiseFn, grid: GridAxis | None = None) -> ConstantReport:
    """Supremum terms D1/D2/D3 for the inner-prefix iterated inequality.

    Case "a" (p <= m, p <= q) returns D1 + D2; case "b" (m < p <= q)
    returns D2 + D3.
    """
    m, p, q = exp.m, exp.p, exp.q
    pp = exp.p_prime
    exp.require_case_ab(case)
    vp = v.powered(1.0 - pp)
    ctx = EvalContext([u, v, vp, w], grid)
    mesh, x = ctx.mesh, ctx.x
    rep = _base_report("gks", case, ctx, {"m": m, "p": p, "q": q})

    W = mesh.cum0(w)
    U = mesh.cuminf(u)
    Vp = mesh.cum0(vp)
    w_cells = mesh.cell_masses(w)

    # non-degeneracy bullets, recorded as flags (never fatal)
    if not integrate(u, 1.0, _INF) < _INF:
        rep.flags.append("nondegeneracy:u-tail-divergent")
    if integrate(u, 0.0, _INF) < _INF:
        rep.flags.append("nondegeneracy:u-total-finite")
    if not integrate(w, 0.0, 1.0) < _INF:
        rep.flags.append("nondegeneracy:w-head-divergent")
    if integrate(w, 1.0, _INF) < _INF:
        rep.flags.append("nondegeneracy:w-tail-finite")
    hprod = _mul(_pw(U[:2], q / m), np.asarray(w(x[:2]), dtype=float))
    if _head_est(float(hprod[0]), float(hprod[1]),
                 float(x[0]), float(x[1])) < _INF:
        rep.flags.append("nondegeneracy:inner-head-convergent")

    sw = ctx.sweep
    if case == "a":
        d1 = _muls(_pw(W[sw], 1.0 / q), _pw(U[sw], 1.0 / m),
                   _pw(Vp[sw], 1.0 / pp))
        rep.terms.append(TermValue("D1", *_best(d1, x[sw])))

    inner_cells = mesh.cells_weighted(_pw(U, q / m), w_cells)
    inner_tail = _mul_s(float(_pw(U[-1], q / m)), mesh.tail(w))
    I2 = Mesh.cuminf_from_cells(inner_cells, inner_tail)
    d2 = _mul(_pw(I2[sw], 1.0 / q), _pw(Vp[sw], 1.0 / pp))
    rep.terms.append(TermValue("D2", *_best(d2, x[sw])))

    if case == "b":
        g = _mul(_pw(U, p / (p - m)), _pw(Vp, p * (m - 1.0) / (p - m)))
        cells3 = mesh.cells_weighted(g, mesh.cell_masses(vp))
        tail3 = _mul_s(float(g[-1]), mesh.tail(vp))
        I3 = Mesh.cuminf_from_cells(cells3, tail3)
        d3 = _mul(_pw(W[sw], 1.0 / q), _pw(I3[sw], (p - m) / (p * m)))
        rep.terms.append(TermValue("D3", *_best(d3, x[sw])))
    return rep


# --------------------------------------------------------------------------
# Theorem with the E-terms
# --------------------------------------------------------------------------


def eval_krepick(case: str, exp: ExponentSet, u: PiecewiseFn, v: PiecewiseFn,
                 w: PiecewiseFn, grid: GridAxis | None = None) -> ConstantReport:
    """Supremum terms E1/E2 for the inner-suffix iterated inequality.

    Requires the admissibility of (u, w): 0 < int_0^t (int_s^t u)^{q/m} w < oo
    for grid t; violations are flagged, not raised, so callers can still
    inspect the partial report.
    """
    m, p, q = exp.m, exp.p, exp.q
    pp = exp.p_prime
    exp.require_case_ab(case)
    vp = v.powered(1.0 - pp)
    ctx = EvalContext([u, v, vp, w], grid)
    mesh, x = ctx.mesh, ctx.x
    rep = _base_report("krepick", case, ctx, {"m": m, "p": p, "q": q})

    Ucum = mesh.cum0(u)
    W = mesh.cum0(w)
    Vinf = mesh.cuminf(vp)
    w_cells = mesh.cell_masses(w)
    u_cells = mesh.cell_masses(u)
    head_w = mesh.head(w)
    sw = ctx.sweep

    e1_vals = np.zeros(len(sw))
    admissible = True
    for kk, j in enumerate(sw):
        diff = _pw(Ucum[j] - Ucum[:j + 1], q / m)
        A = _trap(diff, w_cells[:j]) + _mul_s(float(_pw(Ucum[j], q / m)), head_w)
        if not (A > 0.0) or not math.isfinite(A):
            admissible = False
        e1_vals[kk] = _mul_s(_pw(A, 1.0 / q), float(_pw(Vinf[j], 1.0 / pp)))
    if not admissible:
        rep.flags.append("admissibility:pair-(u,w)-fails-on-grid")
    rep.terms.append(TermValue("E1", *_best(e1_vals, x[sw])))

    if case == "b":
        tail_u = mesh.tail(u)
        e2_vals = np.zeros(len(sw))
        Vfac = _pw(Vinf, m * (p - 1.0) / (p - m))
        for kk, j in enumerate(sw):
            g = _mul(_pw(np.maximum(Ucum[j:] - Ucum[j], 0.0), m / (p - m)),
                     Vfac[j:])
            R = _trap(g, u_cells[j:]) + _mul_s(float(g[-1]), tail_u)
            e2_vals[kk] = _mul_s(float(_pw(W[j], 1.0 / q)),
                                 _pw(R, (p - m) / (p * m)))
        rep.terms.append(TermValue("E2", *_best(e2_vals, x[sw])))
    return rep


# --------------------------------------------------------------------------
# shifted-interval supremum-operator characterizations on (t, oo)
# --------------------------------------------------------------------------


def _resolve_pq_case(case: str | None, p: float, q: float) -> str:
    actual = "p<=q" if p <= q else "q<p"
    if case is None:
        return actual
    norm = case.replace(" ", "")
    if norm not in ("p<=q", "q<p"):
        raise ValueError(f"unknown case {case!r}; expected 'p<=q' or 'q<p'")
    if norm != actual:
        raise RegimeError(f"regime violation: case {case!r} inconsistent "
                          f"with p={p}, q={q}")
    return actual


class _ShiftedEval:
    """Shared machinery for the two characterizations on (t, oo).

    The inner-prefix variant uses the envelope of ``u`` itself; the
    inner-suffix variant substitutes the smoothed pair (smoothed kernel,
    smoothed Lebesgue-dual density) and adds a sixth term.
    """

    def __init__(self, t0: float, p: float, q: float, u, a, v, w,
                 grid: GridAxis | None, smoothed: bool):
        self.t0 = float(t0)
        self.p, self.q = p, q
        self.pp = _conj(p)
        vp = v.powered(1.0 - self.pp)
        self.vp = vp
        extra = [self.t0] if self.t0 > 0.0 else []
        self.ctx = EvalContext([u, a, vp, w], grid, extra_points=extra)
        mesh, x = self.ctx.mesh, self.ctx.x
        self.mesh, self.x = mesh, x
        self.i0 = int(np.searchsorted(x, self.t0)) if self.t0 > 0.0 else 0
        self.flags: list = []

        self.w_cells = mesh.cell_masses(w)
        self.a_cells = mesh.cell_masses(a)
        self.w_nodes = np.asarray(w(x), dtype=float)
        self.tail_w = mesh.tail(w)
        self.tail_a = mesh.tail(a)
        self.Winf = mesh.cuminf(w, self.w_cells)

        vp_cells = mesh.cell_masses(vp)
        head_from_t0 = (integrate(vp, self.t0, float(x[self.i0]))
                        if x[self.i0] > self.t0 else 0.0)
        if smoothed:
            Vsuf = mesh.cuminf(vp, vp_cells)
            if not math.isfinite(Vsuf[-1]):
                self.flags.append("degenerate:dual-density-not-integrable")
            self.Vsuf0 = float(Vsuf[self.i0]) + head_from_t0
            e = -2.0 * self.pp / (self.pp + 1.0)
            # closed-form primitive of the smoothed density in terms of Vsuf
            prim = _pw(Vsuf, e + 1.0) / (e + 1.0)
            self.head_dens = (_pw(self.Vsuf0, e + 1.0)
                              - _pw(float(Vsuf[self.i0]), e + 1.0)) / (e + 1.0)
            Vc = np.zeros(len(x))
            Vc[self.i0:] = self.head_dens + (prim[self.i0] - prim[self.i0:])
            self.Vc = Vc
            self.dens_cells = np.maximum(np.diff(-prim), 0.0)
            self.Vc_tot = _INF     # the smoothed density always has infinite mass
            kern = _mul(np.asarray(u(x), dtype=float),
                        _pw(Vsuf, 2.0 / (self.pp + 1.0)))
            lim, conv = _node_limit(x, kern)
        else:
            self.head_dens = head_from_t0
            Vp = np.zeros(len(x))
            Vp[self.i0:] = Mesh.cum0_from_cells(vp_cells[self.i0:],
                                                self.head_dens)
            self.Vc = Vp
            self.dens_cells = vp_cells
            self.Vc_tot = float(Vp[-1]) + mesh.tail(vp)
            kern = np.asarray(u(x), dtype=float)
            from .operators import _tail_limit
            lim, conv = _tail_limit(u, float(x[-1]))
        if not conv:
            self.flags.append("tail-unconverged:kernel")
        self.kern = kern
        self.kern_lim = lim
        ubar = _running_sup_right(kern, lim if math.isfinite(lim) else 0.0)
        if lim == _INF:
            ubar = np.full_like(ubar, _INF)
        self.ubar = ubar

        # F(y) = int_{t0}^y ubar * a
        fa_cells = mesh.cells_weighted(ubar, self.a_cells)
        head_fa = (_mul_s(float(ubar[0]), mesh.head(a))
                   if self.t0 == 0.0 else 0.0)
        self.F = np.zeros(len(x))
        self.F[self.i0:] = Mesh.cum0_from_cells(fa_cells[self.i0:], head_fa)
        self.F_tot = float(self.F[-1]) + _mul_s(float(ubar[-1]), self.tail_a)

        # A(y) = int_{t0}^y a and its q-weighted cumulative against w
        head_a = integrate(a, 0.0, float(x[0])) if self.t0 == 0.0 else 0.0
        self.Acum = np.zeros(len(x))
        self.Acum[self.i0:] = Mesh.cum0_from_cells(
            self.a_cells[self.i0:], head_a)
        g3_cells = mesh.cells_weighted(_pw(self.Acum, q), self.w_cells)
        head_g3 = _mul_s(float(_pw(self.Acum[self.i0], q)),
                         mesh.head(w) if self.t0 == 0.0 else 0.0)
        self.G3 = np.zeros(len(x))
        self.G3[self.i0:] = Mesh.cum0_from_cells(g3_cells[self.i0:], head_g3)
        self.G3_tot = float(self.G3[-1]) + _tail_corr(
            x, _nz(_mul(_pw(self.Acum, q), self.w_nodes)))

        # psi = kern^{p'} * Vc and its envelope over [x, oo)
        psi = _mul(_pw(kern, self.pp), self.Vc)
        if not smoothed and math.isfinite(self.Vc_tot):
            lim_use = _mul_s(_pw(self.kern_lim, self.pp), self.Vc_tot)
        else:
            lim_use, pconv = _node_limit(x, psi)
            if not pconv:
                self.flags.append("tail-unconverged:envelope")
        self.psi_lim = lim_use
        env = _running_sup_right(psi[self.i0:],
                                 lim_use if math.isfinite(lim_use) else 0.0)
        if lim_use == _INF:
            env = np.full_like(env, _INF)
        self.env = env

        # Stieltjes decrement prefix sums of A^{p'} d(-env)
        dec = np.maximum(_nz(env[:-1] - env[1:]), 0.0)
        s4 = np.zeros(len(env))
        if len(dec):
            s4[1:] = np.cumsum(_mul(_pw(self.Acum[self.i0 + 1:], self.pp), dec))
        self.S4 = s4

        sw = self.ctx.sweep
        self.sw = sw[sw >= self.i0]

    # -- per-candidate inner integrals ------------------------------------

    def inner_T1(self, j: int) -> float:
        vals = _pw(self.F[j] - self.F[self.i0:j + 1], self.pp)
        out = _trap(vals, self.dens_cells[self.i0:j])
        if self.t0 == 0.0 and self.i0 == 0:
            out += _mul_s(float(_pw(self.F[j], self.pp)), self.head_dens)
        return out

    def inner_T2(self, j: int) -> float:
        vals = _pw(_nz(self.F[j:] - self.F[j]), self.q)
        if len(vals) < 2:
            return 0.0
        out = _trap(vals, self.w_cells[j:])
        out += _tail_corr(self.x[j:], _nz(_mul(vals, self.w_nodes[j:])))
        return out

    def env_at(self, j: int) -> float:
        return float(self.env[j - self.i0])

    def s4_at(self, j: int) -> float:
        return float(self.S4[j - self.i0])

    def limit_term_factor(self) -> float:
        """lim_{x->oo} sup_{tau>=x} kern * Vc^{1/p'} (the fifth-term factor)."""
        return _pw(self.psi_lim, 1.0 / self.pp)

    # -- the two branches --------------------------------------------------

    def terms_sup(self) -> list:
        """The five supremum terms of the p <= q branch."""
        q, pp = self.q, self.pp
        x, sw = self.x, self.sw
        t1 = [(_mul_s(_pw(self.inner_T1(j), 1.0 / pp),
                      float(_pw(self.Winf[j], 1.0 / q))), x[j]) for j in sw]
        t2 = [(_mul_s(float(_pw(self.Vc[j], 1.0 / pp)),
                      _pw(self.inner_T2(j), 1.0 / q)), x[j]) for j in sw]
        t3 = [(_mul_s(_pw(max(self.env_at(j) - (self.psi_lim if math.isfinite(self.psi_lim) else 0.0), 0.0), 1.0 / pp),
                      float(_pw(self.G3[j], 1.0 / q))), x[j]) for j in sw]
        t4 = [(_mul_s(_pw(self.s4_at(j), 1.0 / pp),
                      float(_pw(self.Winf[j], 1.0 / q))), x[j]) for j in sw]
        out = []
        for name, pairs in (("T1", t1), ("T2", t2), ("T3", t3), ("T4", t4)):
            vals = [v for v, _ in pairs]
            locs = [loc for _, loc in pairs]
            out.append(TermValue(name, *_best(vals, locs)))
        t5 = _mul_s(_pw(self.G3_tot, 1.0 / q), self.limit_term_factor())
        out.append(TermValue("T5", t5, "inf-limit"))
        return out

    def terms_int(self) -> list:
        """The five integral-form terms of the q < p branch."""
        p, q, pp = self.p, self.q, self.pp
        ee1 = p * (q - 1.0) / (p - q)
        ee2 = q * (p - 1.0) / (p - q)
        ee3 = q / (p - q)
        outer = (p - q) / (p * q)
        x, sw = self.x, self.sw
        mesh = self.mesh

        def coarse_outer(vals_sw, mu_nodes, mu_tail):
            """Trapezoid on the candidate partition against the measure mu."""
            acc = 0.0
            for k in range(len(sw) - 1):
                dm = mu_nodes[sw[k + 1]] - mu_nodes[sw[k]]
                acc += 0.5 * (vals_sw[k] + vals_sw[k + 1]) * dm
            acc += _mul_s(vals_sw[-1], mu_tail)
            return acc

        # cumulatives of the measures for the coarse partition masses
        w_cum = Mesh.cum0_from_cells(self.w_cells, 0.0)
        vp_cum = Mesh.cum0_from_cells(self.dens_cells, 0.0)

        J = np.array([self.inner_T2(j) for j in sw])
        vals1 = _mul(_pw(self.Vc[sw], ee1), _pw(J, p / (p - q)))
        s1 = _pw(coarse_outer(vals1, vp_cum, 0.0), outer)

        I1 = np.array([self.inner_T1(j) for j in sw])
        vals2 = _mul(_pw(I1, ee2), _pw(self.Winf[sw], ee3))
        s2 = _pw(coarse_outer(vals2, w_cum, 0.0), outer)

        lim = self.psi_lim if math.isfinite(self.psi_lim) else 0.0
        env_sw = np.array([max(self.env_at(j) - lim, 0.0) for j in sw])
        vals3 = _muls(_pw(env_sw, ee2), _pw(self.G3[sw], ee3),
                      _pw(self.Acum[sw], q))
        s3 = _pw(coarse_outer(vals3, w_cum, 0.0), outer)

        s4_sw = np.array([self.s4_at(j) for j in sw])
        vals4 = _mul(_pw(s4_sw, ee2), _pw(self.Winf[sw], ee3))
        s4 = _pw(coarse_outer(vals4, w_cum, 0.0), outer)

        t5 = _mul_s(_pw(self.G3_tot, 1.0 / q), self.limit_term_factor())
        return [TermValue("T1", float(s1)), TermValue("T2", float(s2)),
                TermValue("T3", float(s3)), TermValue("T4", float(s4)),
                TermValue("T5", t5, "inf-limit")]


def eval_aux2(t: float, p: float, q: float, u, a, v, w,
              case: str | None = None,
              grid: GridAxis | None = None) -> ConstantReport:
    """Characterization of the inner-prefix restricted inequality on (t, oo)."""
    case = _resolve_pq_case(case, p, q)
    ev = _ShiftedEval(t, p, q, u, a, v, w, grid, smoothed=False)
    rep = _base_report("aux2", case, ev.ctx, {"t": t, "p": p, "q": q})
    rep.flags.extend(ev.flags)
    rep.terms.extend(ev.terms_sup() if case == "p<=q" else ev.terms_int())
    return rep


def eval_aux3(t: float, p: float, q: float, u, a, v, w,
              case: str | None = None,
              grid: GridAxis | None = None) -> ConstantReport:
    """Characterization of the inner-suffix restricted inequality on (t, oo).

    Uses the smoothed kernel/density pair and appends the sixth term with
    the prefactor (int_t^oo v^{1-p'})^{-1/(p(p'+1))} exactly as stated.
    The proof-derived variant of that prefactor differs by the constant
    factor (p'+1)^{-1/p}; it is reported as an informational extra term.
    """
    case = _resolve_pq_case(case, p, q)
    ev = _ShiftedEval(t, p, q, u, a, v, w, grid, smoothed=True)
    rep = _base_report("aux3", case, ev.ctx, {"t": t, "p": p, "q": q})
    rep.flags.extend(ev.flags)
    rep.terms.extend(ev.terms_sup() if case == "p<=q" else ev.terms_int())

    # sixth term: prefactor times the full outer integral of F^q against w
    pref = _pw(ev.Vsuf0, -1.0 / (p * (ev.pp + 1.0)))
    fq = _pw(ev.F, q)
    body_cells = ev.mesh.cells_weighted(fq, ev.w_cells)
    body = float(np.sum(body_cells[ev.i0:]))
    body += _tail_corr(ev.x, _nz(_mul(fq, ev.w_nodes)))
    t6 = _mul_s(float(pref), _pw(body, 1.0 / q))
    rep.terms.append(TermValue("T6", t6, None))
    variant = _mul_s(_pw(ev.pp + 1.0, -1.0 / p), t6)
    rep.terms.append(TermValue("T6_proof_variant", variant, None,
                               flags=["informational"]))
    return rep


# --------------------------------------------------------------------------
# main restricted-inequality characterizations
# --------------------------------------------------------------------------


class _MainEval:
    """Shared kernels for the four-term and fourteen-term characterizations."""

    def __init__(self, exp: ExponentSet, u, b, v, w, grid: GridAxis | None):
        self.exp = exp
        m, p, r, q = exp.m, exp.p, exp.r, exp.q
        self.mp, self.pp = exp.m_prime, exp.p_prime
        self.flags: list = []
        if not check_nondegenerate(v, m, p):
            self.flags.append("degenerate-v")
        dw = derive_v012(v, m, p, check=False)
        self.dw = dw
        self.ctx = EvalContext([u, b, v, w, dw.v2], grid)
        mesh, x = self.ctx.mesh, self.ctx.x
        self.mesh, self.x = mesh, x
        self.dx = np.diff(x)

        self.w_cells = mesh.cell_masses(w)
        self.w_nodes = np.asarray(w(x), dtype=float)
        self.tail_w = mesh.tail(w)
        self.head_w = mesh.head(w)
        self.Winf = mesh.cuminf(w, self.w_cells)
        self.Wcum = mesh.cum0(w, self.w_cells)

        self.Bn = mesh.cum0(b)
        self.u_nodes = np.asarray(u(x), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            uB = np.where(self.Bn > 0.0, self.u_nodes / self.Bn, 0.0)
        self.uB = uB
        lim_uB, conv = _node_limit(x, uB)
        if not conv:
            self.flags.append("tail-unconverged:kernel-ratio")
        self.uB_lim = lim_uB
        self.env_uB = _running_sup_right(
            uB, lim_uB if math.isfinite(lim_uB) else 0.0)
        if lim_uB == _INF:
            self.env_uB = np.full_like(self.env_uB, _INF)

        # C(y) = int (B/s)^{p'} ds, from node samples
        bb = _pw(np.where(x > 0.0, self.Bn / x, 0.0), self.pp)
        c_cells = 0.5 * (bb[:-1] + bb[1:]) * self.dx
        c_head = _head_est(float(bb[0]), float(bb[1]), float(x[0]), float(x[1]))
        self.C = Mesh.cum0_from_cells(c_cells, c_head)

        # v2 cells and cumulative
        self.v2_nodes = np.asarray(dw.v2(x), dtype=float)
        self.v2_cells = mesh.cell_masses(dw.v2)
        self.v2_head = mesh.head(dw.v2)
        self.V2cum = Mesh.cum0_from_cells(self.v2_cells, self.v2_head)
        self.v2_tailmass = _tail_corr(x, self.v2_nodes)

        # envelope of (u/B)^r and its cumulative
        E = _pw(self.env_uB, r)
        e_cells = 0.5 * (E[:-1] + E[1:]) * self.dx
        e_head = _head_est(float(E[0]), float(E[1]), float(x[0]), float(x[1]))
        if not math.isfinite(e_head):
            e_head = float(E[0]) * float(x[0])
        self.EC = Mesh.cum0_from_cells(e_cells, e_head)
        self.E_lim = float(E[-1])
        self.EC_tot = float(self.EC[-1]) + (
            _INF if self.E_lim > 0.0 else 0.0)

        self.sw = self.ctx.sweep
        self.r, self.q, self.p, self.m = r, q, p, m

    # -- shared per-candidate quantities ----------------------------------

    def W1(self, j: int) -> float:
        """int_0^t (int_s^t (B/y)^{p'} dy)^{m'/p'} v2(s) ds at t = x[j]."""
        vals = _pw(self.C[j] - self.C[:j + 1], self.mp / self.pp)
        out = _trap(vals, self.v2_cells[:j])
        out += _mul_s(float(_pw(self.C[j], self.mp / self.pp)), self.v2_head)
        return out

    def G2(self, j: int) -> float:
        """int_0^oo (yt/(y+t))^{q/r} w(y) dy at t = x[j]."""
        t = float(self.x[j])
        vals = _pw(self.x * t / (self.x + t), self.q / self.r)
        out = _trap(vals, self.w_cells)
        out += _mul_s(float(vals[0]), self.head_w)
        out += _mul_s(float(_pw(t, self.q / self.r)), self.tail_w)
        return out

    def inner_env_cum(self, j: int) -> float:
        """int_t^oo ( int_t^y env[(u/B)^r] )^{q/r} w(y) dy at t = x[j]."""
        H = _pw(_nz(self.EC[j:] - self.EC[j]), self.q / self.r)
        if len(H) < 2:
            return 0.0
        out = _trap(H, self.w_cells[j:])
        out += _tail_corr(self.x[j:], _nz(_mul(H, self.w_nodes[j:])))
        return out

    def _v2_tail_power(self) -> tuple[float, float]:
        """Power extrapolation v2(s) ~ c * s^kappa beyond the grid."""
        x = self.x
        jm = min(int(np.searchsorted(x, x[-1] / 2.0)), len(x) - 2)
        v_jm, v_end = float(self.v2_nodes[jm]), float(self.v2_nodes[-1])
        if not (v_jm > 0.0 and v_end > 0.0 and math.isfinite(v_end)):
            return 0.0, 0.0
        kappa = math.log(v_end / v_jm) / math.log(x[-1] / x[jm])
        return v_end / x[-1] ** kappa, kappa

    def V3(self, j: int, with_t_factor: bool) -> float:
        """Smoothing integral (int_0^oo kernel(s,t)^{m'/p} v2)^{1/m'}.

        The tail beyond the grid cannot be read off the last nodes when t
        sits near the boundary (the kernel turns over at s ~ t), so it is
        integrated analytically from a power extrapolation of v2.
        """
        t = float(self.x[j])
        e_k = self.mp / self.p
        base = (t / (self.x + t)) if with_t_factor else (1.0 / (self.x + t))
        vals = _pw(base, e_k)
        out = _trap(vals, self.v2_cells)
        out += _mul_s(float(vals[0]), self.v2_head)
        c, kappa = self._v2_tail_power()
        if c > 0.0:
            if kappa - e_k >= -1.0:
                return _INF
            from scipy.integrate import quad
            xm = float(self.x[-1])
            tf = t if with_t_factor else 1.0

            def f(y: float) -> float:
                z = xm * math.exp(y)
                return (tf / (z + t)) ** e_k * c * z ** (kappa + 1.0)

            # pure relative tolerance keeps the adaptive subdivision (and
            # hence the result) exactly homogeneous under weight scaling
            out += quad(f, 0.0, 80.0, limit=200, epsabs=0.0,
                        epsrel=1e-11)[0]
        return _pw(out, 1.0 / self.mp)

    def windowed_usup(self, j: int) -> np.ndarray:
        """(sup_{x<=tau<=t} u(tau)^r) at nodes x <= t, for t = x[j]."""
        ur = _pw(self.u_nodes[:j + 1], self.r)
        return np.maximum.accumulate(ur[::-1])[::-1]

    def term12_shared(self) -> list:
        """The two leading terms shared by both main characterizations."""
        q, mp = self.q, self.mp
        sw, x = self.sw, self.x
        v1, v2 = [], []
        for j in sw:
            w1 = _pw(self.W1(j), 1.0 / mp)
            v1.append(_mul_s(_mul_s(w1, float(self.env_uB[j])),
                             _pw(self.G2(j), 1.0 / q)))
            v2.append(_mul_s(w1, _pw(self.inner_env_cum(j), 1.0 / q)))
        return [TermValue("T1", *_best(v1, x[sw]), flags=["block:A"]),
                TermValue("T2", *_best(v2, x[sw]), flags=["block:A"])]


def eval_thm33(exp: ExponentSet, u, b, v, w,
               grid: GridAxis | None = None) -> ConstantReport:
    """Four-term characterization for the regime 1 < m < p <= r < q."""
    exp.require_thm33()
    ev = _MainEval(exp, u, b, v, w, grid)
    rep = _base_report("thm33", "", ev.ctx,
                       {"m": exp.m, "p": exp.p, "r": exp.r, "q": exp.q})
    rep.flags.extend(ev.flags)
    q, r = exp.q, exp.r
    x, sw, mesh = ev.x, ev.sw, ev.mesh

    # precondition 0 < W1(t) < oo, probed at a few spread-out candidates
    probes = [ev.W1(int(j)) for j in sw[:: max(len(sw) // 8, 1)]]
    if not all(0.0 < pb < _INF for pb in probes):
        rep.flags.append("precondition:W1-degenerate")

    rep.terms.extend(ev.term12_shared())

    v3vals, v4vals = [], []
    for j in sw:
        V3 = ev.V3(j, with_t_factor=False)
        M = ev.windowed_usup(j)
        p_cells = 0.5 * (M[:-1] + M[1:]) * ev.dx[:j]
        P = Mesh.cum0_from_cells(p_cells, float(M[0]) * float(x[0]))
        inner3 = _trap(_pw(P, q / r), ev.w_cells[:j])
        inner3 += _mul_s(float(_pw(P[0], q / r)), ev.head_w)
        v3vals.append(_mul_s(V3, _pw(inner3, 1.0 / q)))
        v4vals.append(_mul_s(_mul_s(V3, float(_pw(P[j], 1.0 / r))),
                             float(_pw(ev.Winf[j], 1.0 / q))))
    rep.terms.append(TermValue("T3", *_best(v3vals, x[sw]), flags=["block:B"]))
    rep.terms.append(TermValue("T4", *_best(v4vals, x[sw]), flags=["block:B"]))
    return rep


def eval_thm34(case: str, exp: ExponentSet, u, b, v, w,
               grid: GridAxis | None = None) -> ConstantReport:
    """Fourteen-term characterization for the regime 1 < m <= r < min{p,q}.

    Case "i" is the supremum form (p <= q), case "ii" the integral form
    (q < p).  The first two terms coincide with the four-term theorem's
    leading terms; terms 3-8 form the kernel (A) block, terms 9-14 the
    smoothing (B) block.
    """
    exp.require_thm34()
    if case not in ("i", "ii"):
        raise ValueError(f"unknown case {case!r}; expected 'i' or 'ii'")
    p, q, r, m = exp.p, exp.q, exp.r, exp.m
    if case == "i" and not p <= q:
        raise RegimeError("regime violation: case i requires p <= q")
    if case == "ii" and not q < p:
        raise RegimeError("regime violation: case ii requires q < p")
    if not 2.0 * p - r > 0.0:
        raise RegimeError("regime violation: kernel exponent needs 2p - r > 0")

    ev = _MainEval(exp, u, b, v, w, grid)
    rep = _base_report("thm34", case, ev.ctx,
                       {"m": m, "p": p, "r": r, "q": q})
    rep.flags.extend(ev.flags)
    x, sw, mesh = ev.x, ev.sw, ev.mesh
    mp, pp = ev.mp, ev.pp
    n = len(x)

    # displayed preconditions, grid-certified
    probes = sw[:: max(len(sw) // 8, 1)]
    if not all(0.0 < ev.W1(int(j)) < _INF for j in probes):
        rep.flags.append("precondition:W1-degenerate")
    if not all(0.0 < ev.V2cum[int(j)] < _INF for j in probes):
        rep.flags.append("precondition:V2-degenerate")
    h34 = _muls(_pw(x, mp * (1.0 - 2.0 / p)), ev.v2_nodes, _pw(x, -mp / pp))
    if not _tail_est(float(h34[-2]), float(h34[-1]),
                     float(x[-2]), float(x[-1])) < _INF:
        rep.flags.append("precondition:V3-tail-divergent")
    if _head_est(float(h34[0]), float(h34[1]),
                 float(x[0]), float(x[1])) < _INF:
        rep.flags.append("precondition:head-divergence-missing")
    if ev.v2_tailmass < _INF:
        rep.flags.append("precondition:tail-divergence-missing")

    er = (p - r) / (p * r)
    kappa = p * (r - 1.0) / (p - r)
    cb_e = r * (p - 1.0) / (p - r)
    cb_c = (p - r) / (r * (p - 1.0))
    gamma = p * (3.0 * r - 2.0 * p) / ((2.0 * p - r) * (p - r))
    kexp = -2.0 / (2.0 * p - r)
    coarse = ev.ctx.coarse

    rep.terms.extend(ev.term12_shared())

    # t-independent precomputations
    # J5[k] = int_{x_k}^oo (EC - EC[k])^{q/r} w  at sweep candidates
    J5 = np.array([ev.inner_env_cum(int(k)) for k in sw])
    yqr = _pw(x, q / r)
    gyq_cells = mesh.cells_weighted(yqr, ev.w_cells)
    gyq_head = _mul_s(float(yqr[0]), ev.head_w)
    Gyq = Mesh.cum0_from_cells(gyq_cells, gyq_head)
    Gyq_tot = float(Gyq[-1]) + _tail_corr(x, _nz(_mul(yqr, ev.w_nodes)))

    if case == "ii":
        ee1 = p * (q - r) / (r * (p - q))
        ee2 = q * (p - r) / (r * (p - q))
        ee3 = q / (p - q)
        outer = (p - q) / (p * q)

    # accumulators for the twelve remaining terms
    names_i = [f"T{k}" for k in range(3, 15)]
    acc = {nm: (-_INF, None) for nm in names_i}

    def keep(nm, val, loc):
        if math.isnan(val):
            val = 0.0
        if val > acc[nm][0]:
            acc[nm] = (val, loc)

    J5_by_idx = dict(zip((int(k) for k in sw), J5))

    for j in sw:
        t = float(x[j])
        V2 = _pw(ev.V2cum[j], 1.0 / mp)
        V3 = ev.V3(j, with_t_factor=True)
        G2j = ev.G2(j)
        sw_ge = sw[sw >= j]
        co_ge = coarse[coarse >= j]

        # kernel-block rows at this t
        Cdiff = np.maximum(ev.C[j:] - ev.C[j], 0.0)
        CB = cb_c * _pw(Cdiff, cb_e)              # int_t^x B-kernel, closed form
        Brow = _mul(_pw(Cdiff, kappa),
                    _pw(np.where(x[j:] > 0.0, ev.Bn[j:] / x[j:], 0.0), pp))

        # term 3: sup_{tau>=t} (u/B) (int_t^tau B-kernel)^{er}
        tmp3 = _mul(ev.uB[j:], _pw(CB, er))
        sup3 = float(np.max(np.where(np.isnan(tmp3), 0.0, tmp3)))
        keep("T3", _mul_s(_mul_s(V2, sup3), _pw(G2j, 1.0 / q)), t)

        # envelope for terms 6-8: (u/B)^{pr/(p-r)} * int_t^tau B-kernel
        psi6 = _mul(_pw(ev.uB[j:], p * r / (p - r)), CB)
        l6, c6 = _node_limit(x[j:], psi6)
        env6 = _running_sup_right(psi6, l6 if math.isfinite(l6) else 0.0)
        if l6 == _INF:
            env6 = np.full_like(env6, _INF)
        if not c6:
            rep.flags.append("tail-unconverged:T6-envelope")
        # a flat-at-infinity stretch of the envelope has zero decrement
        with np.errstate(invalid="ignore"):
            d6 = env6[:-1] - env6[1:]
        dec6 = np.where(np.isnan(d6), 0.0, np.maximum(d6, 0.0))
        ymt = np.maximum(x[j:] - t, 0.0)
        g6_cells = mesh.cells_weighted(_pw(ymt, q / r), ev.w_cells[j:])
        G6 = Mesh.cum0_from_cells(g6_cells, 0.0)
        G6_tot = float(G6[-1]) + _tail_corr(
            x[j:], _nz(_mul(_pw(ymt, q / r), ev.w_nodes[j:])))
        S7 = np.zeros(len(env6))
        if len(dec6):
            S7[1:] = np.cumsum(_mul(_pw(ymt[1:], p / (p - r)), dec6))

        phi8 = _mul(ev.uB[j:], _pw(CB, er))
        l8, c8 = _node_limit(x[j:], phi8)
        if not c8:
            rep.flags.append("tail-unconverged:T8-limit")
        keep("T8", _mul_s(_mul_s(V2, _pw(G6_tot, 1.0 / q)), l8), t)

        # smoothing-block rows at this t
        K = _mul(ev.u_nodes, _pw(x + t, kexp))
        EK = _running_sup_right(_pw(K, r), 0.0)
        ek_cells = 0.5 * (EK[:-1] + EK[1:]) * ev.dx
        EKC = Mesh.cum0_from_cells(ek_cells, float(EK[0]) * float(x[0]))
        if gamma == -1.0:
            Yv = np.log1p(x / t)
        else:
            Yv = (_pw(x + t, gamma + 1.0) - t ** (gamma + 1.0)) / (gamma + 1.0)
        Yv_cells = np.diff(Yv)

        def J10(k: int) -> float:
            H = _pw(_nz(EKC[k:] - EKC[k]), q / r)
            if len(H) < 2:
                return 0.0
            out = _trap(H, ev.w_cells[k:])
            out += _tail_corr(x[k:], _nz(_mul(H, ev.w_nodes[k:])))
            return out

        def I4(k: int) -> float:
            vals = _mul(Brow[: k - j + 1],
                        _pw(ev.EC[k] - ev.EC[j:k + 1], p / (p - r)))
            return _trap(vals, ev.dx[j:k])

        def I9(k: int) -> float:
            vals = _pw(EKC[k] - EKC[: k + 1], p / (p - r))
            out = _trap(vals, Yv_cells[:k])
            out += _mul_s(float(_pw(EKC[k], p / (p - r))), float(Yv[0]))
            return out

        # envelope for terms 11-12
        psi11 = _mul(_pw(K, p * r / (p - r)), Yv)
        l11, c11 = _node_limit(x, psi11)
        env11 = _running_sup_right(psi11, l11 if math.isfinite(l11) else 0.0)
        if l11 == _INF:
            env11 = np.full_like(env11, _INF)
        if not c11:
            rep.flags.append("tail-unconverged:T11-envelope")
        with np.errstate(invalid="ignore"):
            d11 = env11[:-1] - env11[1:]
        dec11 = np.where(np.isnan(d11), 0.0, np.maximum(d11, 0.0))
        S12 = np.zeros(n)
        if len(dec11):
            S12[1:] = np.cumsum(_mul(_pw(x[1:], p / (p - r)), dec11))

        phi13 = _mul(K, _pw(Yv, er))
        l13, c13 = _node_limit(x, phi13)
        if not c13:
            rep.flags.append("tail-unconverged:T13-limit")
        keep("T13", _mul_s(_mul_s(V3, l13), _pw(Gyq_tot, 1.0 / q)), t)

        ekq = _pw(EKC, q / r)
        inner14 = _trap(ekq, ev.w_cells)
        inner14 += _mul_s(float(ekq[0]), ev.head_w)
        inner14 += _tail_corr(x, _nz(_mul(ekq, ev.w_nodes)))
        keep("T14", _mul_s(_mul_s(V3, float(_pw(t, r / (p * (2.0 * p - r))))),
                           _pw(inner14, 1.0 / q)), t)

        if case == "i":
            def e4(k):
                return _mul_s(_pw(I4(k), er), float(_pw(ev.Winf[k], 1.0 / q)))

            s4, _ = ev.ctx.sup_refined(e4, co_ge)
            keep("T4", _mul_s(V2, s4), t)

            vals5 = _mul(_pw(CB[sw_ge - j], er),
                         _pw(np.array([J5_by_idx[int(k)] for k in sw_ge]),
                             1.0 / q))
            keep("T5", _mul_s(V2, float(np.max(vals5)) if len(vals5) else 0.0), t)

            vals6 = _mul(_pw(np.maximum(
                env6[sw_ge - j] - (l6 if math.isfinite(l6) else 0.0), 0.0), er),
                _pw(G6[sw_ge - j], 1.0 / q))
            keep("T6", _mul_s(V2, float(np.max(vals6)) if len(vals6) else 0.0), t)

            vals7 = _mul(_pw(S7[sw_ge - j], er), _pw(ev.Winf[sw_ge], 1.0 / q))
            keep("T7", _mul_s(V2, float(np.max(vals7)) if len(vals7) else 0.0), t)

            def e9(k):
                return _mul_s(_pw(I9(k), er), float(_pw(ev.Winf[k], 1.0 / q)))

            s9, _ = ev.ctx.sup_refined(e9, coarse)
            keep("T9", _mul_s(V3, s9), t)

            def e10(k):
                return _mul_s(float(_pw(Yv[k], er)), _pw(J10(k), 1.0 / q))

            s10, _ = ev.ctx.sup_refined(e10, coarse)
            keep("T10", _mul_s(V3, s10), t)

            vals11 = _mul(_pw(np.maximum(
                env11[sw] - (l11 if math.isfinite(l11) else 0.0), 0.0), er),
                _pw(Gyq[sw], 1.0 / q))
            keep("T11", _mul_s(V3, float(np.max(vals11))), t)

            vals12 = _mul(_pw(S12[sw], er), _pw(ev.Winf[sw], 1.0 / q))
            keep("T12", _mul_s(V3, float(np.max(vals12))), t)
        else:
            # integral forms on the coarse candidate partition
            def coarse_int(cands, vals, mu_nodes, mu_tail=0.0):
                acc_v = 0.0
                for kk in range(len(cands) - 1):
                    dm = mu_nodes[cands[kk + 1]] - mu_nodes[cands[kk]]
                    acc_v += 0.5 * (vals[kk] + vals[kk + 1]) * dm
                if len(cands):
                    acc_v += _mul_s(vals[-1], mu_tail)
                return acc_v

            CB_nodes = np.zeros(n)
            CB_nodes[j:] = CB
            Wc = ev.Wcum

            vals4 = _mul(_pw(CB_nodes[co_ge], ee1),
                         _pw(np.array([J5_by_idx.get(int(k), ev.inner_env_cum(int(k)))
                                       for k in co_ge]), p / (p - q)))
            s4 = coarse_int(co_ge, vals4, CB_nodes)
            keep("T4", _mul_s(V2, _pw(s4, outer)), t)

            vals5 = _mul(_pw(np.array([I4(int(k)) for k in co_ge]), ee2),
                         _pw(ev.Winf[co_ge], ee3))
            s5 = coarse_int(co_ge, vals5, Wc, 0.0)
            keep("T5", _mul_s(V2, _pw(s5, outer)), t)

            l6f = l6 if math.isfinite(l6) else 0.0
            vals6 = _muls(_pw(np.maximum(env6 - l6f, 0.0), ee2),
                          _pw(G6, ee3), _pw(ymt, q / r))
            s6 = _trap(vals6, ev.w_cells[j:])
            keep("T6", _mul_s(V2, _pw(s6, outer)), t)

            vals7 = _mul(_pw(S7, ee2), _pw(ev.Winf[j:], ee3))
            s7 = _trap(vals7, ev.w_cells[j:])
            keep("T7", _mul_s(V2, _pw(s7, outer)), t)

            vals9 = _mul(_pw(Yv[coarse], ee1),
                         _pw(np.array([J10(int(k)) for k in coarse]),
                             p / (p - q)))
            s9 = coarse_int(coarse, vals9, Yv)
            keep("T9", _mul_s(V3, _pw(s9, outer)), t)

            vals10 = _mul(_pw(np.array([I9(int(k)) for k in coarse]), ee2),
                          _pw(ev.Winf[coarse], ee3))
            s10 = coarse_int(coarse, vals10, Wc, 0.0)
            keep("T10", _mul_s(V3, _pw(s10, outer)), t)

            l11f = l11 if math.isfinite(l11) else 0.0
            vals11 = _muls(_pw(np.maximum(env11 - l11f, 0.0), ee2),
                           _pw(Gyq, ee3), yqr)
            s11 = _trap(vals11, ev.w_cells)
            keep("T11", _mul_s(V3, _pw(s11, outer)), t)

            vals12 = _mul(_pw(S12, ee2), _pw(ev.Winf, ee3))
            s12 = _trap(vals12, ev.w_cells)
            keep("T12", _mul_s(V3, _pw(s12, outer)), t)

    block = {"T3": "A", "T4": "A", "T5": "A", "T6": "A", "T7": "A", "T8": "A",
             "T9": "B", "T10": "B", "T11": "B", "T12": "B", "T13": "B",
             "T14": "B"}
    for nm in names_i:
        val, loc = acc[nm]
        if val == -_INF:
            val, loc = 0.0, None
        flags = [f"block:{block[nm]}"]
        if nm in ("T8", "T13"):
            rep.terms.append(TermValue(nm, val, "inf-limit", flags=flags))
        else:
            rep.terms.append(TermValue(nm, val, loc, flags=flags))
    # deduplicate repeated tail flags
    rep.flags = sorted(set(rep.flags))
    return rep


# --------------------------------------------------------------------------
# maximal-operator reduction and norm
# --------------------------------------------------------------------------


def reduce_maximal(alpha: float, b: PiecewiseFn,
                   phi: PiecewiseFn) -> tuple[WeightFn, PiecewiseFn]:
    """Kernel weight for the reduction of the generalized maximal operator.

    Returns (u, b) with u = B / phi^alpha, so that the maximal-operator
    inequality becomes the supremum-operator inequality with every exponent
    divided by alpha.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    B = primitive_B(b)
    u = B * phi.powered(-alpha)
    return WeightFn.wrap(u, check=False), b


def maximal_certificates(alpha: float, b: PiecewiseFn, phi: PiecewiseFn,
                         r: float) -> dict:
    """Grid certificates for the reduction hypotheses (flagged, not fatal)."""
    B = primitive_B(b)
    ok_d2, _ = check_delta2(B)
    ratio = B * PiecewiseFn.power(-alpha / r)
    ok_qi, _ = check_quasi_increasing(ratio)
    ok_phi_qi, _ = check_quasi_increasing(phi)
    ok_qr, _ = check_Qr(phi, r)
    b_total = integrate(b, 1.0, _INF)
    return {
        "B-delta2": bool(ok_d2),
        "B-unbounded": bool(b_total == _INF or b_total > 0.0 and not math.isfinite(b_total)),
        "B-ratio-quasi-increasing": bool(ok_qi),
        "phi-quasi-increasing": bool(ok_phi_qi),
        "phi-Qr": bool(ok_qr),
    }


def eval_maximal_norm(regime: str, alpha: float, p1: float, m1: float,
                      p2: float, m2: float, b, phi, v, w,
                      grid: GridAxis | None = None) -> ConstantReport:
    """Operator norm of the generalized maximal operator between GG spaces.

    Implemented, per the reduction theorem, as the substituted core
    characterization with kernel u = B/phi^alpha and every exponent divided
    by alpha, raising each term to the power 1/alpha.  The tilde derived
    weights arise automatically: the substituted conjugates of (m1/alpha,
    p1/alpha) reproduce them exactly.
    """
    if regime not in ("thm41", "thm42(i)", "thm42(ii)"):
        raise ValueError(f"unknown regime {regime!r}")
    if regime == "thm41":
        if not (0.0 < alpha < m1 < p1 <= p2 < m2 < _INF):
            raise RegimeError("regime violation: requires "
                              "0 < alpha < m1 < p1 <= p2 < m2")
    else:
        if not (0.0 < alpha < m1 <= p2 < min(p1, m2) < _INF):
            raise RegimeError("regime violation: requires "
                              "0 < alpha < m1 <= p2 < min{p1, m2}")
        if regime == "thm42(i)" and not p1 <= m2:
            raise RegimeError("regime violation: sub-case (i) requires p1 <= m2")
        if regime == "thm42(ii)" and not m2 < p1:
            raise RegimeError("regime violation: sub-case (ii) requires m2 < p1")

    exp = ExponentSet.maximal(alpha, p1, m1, p2, m2)
    u, b = reduce_maximal(alpha, b, phi)
    certs = maximal_certificates(alpha, b, phi, max(alpha, exp.r or alpha))
    if regime == "thm41":
        core = eval_thm33(exp, u, b, v, w, grid)
    else:
        core = eval_thm34("i" if regime == "thm42(i)" else "ii",
                          exp, u, b, v, w, grid)
    rep = ConstantReport(theorem=regime, case=core.case, grid=core.grid,
                         terms=[], flags=list(core.flags),
                         params={"alpha": alpha, "p1": p1, "m1": m1,
                                 "p2": p2, "m2": m2})
    for name, ok in sorted(certs.items()):
        if not ok:
            rep.flags.append(f"certificate:{name}")
    for tv in core.terms:
        rep.terms.append(TermValue(tv.name, float(_pw(tv.value, 1.0 / alpha)),
                                   tv.argsup, list(tv.flags)))
    return rep
