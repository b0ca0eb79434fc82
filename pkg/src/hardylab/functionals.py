"""Weighted Lebesgue, classical Lorentz, and generalized Lorentz functionals.

All norms act on non-increasing step profiles (the rearranged form) or on
plain functions for the Lebesgue case, and report divergence through an
extended-real value plus per-constituent flags.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .axis import PiecewiseFn, integrate, sup_on
from .rearrangement import RearrangedFn, double_star
from .weights import check_nondegenerate, cum0_fn, derive_v012

__all__ = ["NormValue", "norm_Lp", "norm_lambda", "norm_gamma", "norm_GG",
           "assoc_norm_GG"]

_INF = math.inf


@dataclass(frozen=True)
class NormValue:
    value: float
    flags: tuple[str, ...] = ()

    def __float__(self):
        return float(self.value)

    @property
    def divergent(self) -> bool:
        return self.value == _INF


def _finish(raw: float, root: float, flags=()) -> NormValue:
    if raw == _INF:
        return NormValue(_INF, tuple(flags) + ("divergent",))
    return NormValue(raw ** root, tuple(flags))


def norm_Lp(f: PiecewiseFn, p: float, w: PiecewiseFn) -> NormValue:
    """Weighted Lebesgue norm; essential sup of |f| w at p = inf."""
    if p == _INF:
        return NormValue(sup_on(f * w, 0.0, _INF))
    raw = integrate(f.powered(p) * w, 0.0, _INF)
    return _finish(raw, 1.0 / p)


def norm_lambda(fstar: RearrangedFn, alpha: float, b: PiecewiseFn) -> NormValue:
    """Lorentz lambda-functional: (int (f*)^alpha b)^(1/alpha), exact on steps."""
    step = fstar.step
    B = cum0_fn(b) if b.kind == "analytic" else None
    if B is not None:
        Bv = np.asarray(B(step.edges))
        masses = np.diff(Bv)
    else:
        masses = np.array([integrate(b, lo, hi)
                           for lo, hi in zip(step.edges[:-1], step.edges[1:])])
    raw = float(np.dot(step.values ** alpha, masses))
    return _finish(raw, 1.0 / alpha)


def norm_gamma(fstar: RearrangedFn, p: float, w: PiecewiseFn) -> NormValue:
    """(int (f**)^p w)^(1/p) with the averaged rearrangement f**."""
    fss = double_star(fstar)
    raw = integrate(fss.powered(p) * w, 0.0, _INF)
    return _finish(raw, 1.0 / p)


def _cum_power(fstar: RearrangedFn, p: float) -> PiecewiseFn:
    """``x -> int_0^x (f*)^p`` -- piecewise linear, exact on the steps."""
    step = fstar.step
    edges = step.edges
    heights = step.values ** p
    cum = np.concatenate([[0.0], np.cumsum(step.lengths * heights)])

    def call(x):
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(edges, x, side="right") - 1,
                      0, len(heights) - 1)
        out = cum[idx] + heights[idx] * (np.minimum(x, edges[-1]) - edges[idx])
        return np.where(x >= edges[-1], cum[-1], np.where(x <= 0, 0.0, out))

    return PiecewiseFn.from_callable(call, tuple(edges[edges > 0.0]),
                                     tail0=1.0 if len(heights) else 0.0,
                                     tailinf=0.0)


def norm_GG(fstar: RearrangedFn, p: float, m: float, v: PiecewiseFn) -> NormValue:
    """Generalized Lorentz norm with inner p-means against v."""
    Phi = _cum_power(fstar, p)
    raw = integrate(Phi.powered(m / p) * v, 0.0, _INF)
    return _finish(raw, 1.0 / m)


def assoc_norm_GG(gstar: RearrangedFn, p: float, m: float, v: PiecewiseFn,
                  force: bool = False) -> NormValue:
    """Associate (Koethe dual) norm of the generalized Lorentz space.

    Computed from the two-weight formula with the derived weights: the
    integrand is (int_t^inf (g**)^p' ds)^(m'/p') times
    t^(m'/p') v0(t) / v1(t)^(m'+1).  Requires the non-degeneracy
    certificate for (m, p) unless ``force`` is set, in which case the
    result is flagged.
    """
    flags = []
    if not check_nondegenerate(v, m, p):
        if not force:
            raise ValueError("v fails the non-degeneracy certificate for (m,p)")
        flags.append("degenerate-v")
    pp = p / (p - 1.0)
    mp = m / (m - 1.0)
    dw = derive_v012(v, m, p, check=False)
    gss = double_star(gstar)
    gpow = gss.powered(pp)

    # int_t^inf (g**)^p': g** ~ M/t at infinity, so the power p' > 1 closes
    # the tail; tabulate the suffix once and interpolate
    from . import defaults
    from .axis import Mesh, make_log_grid
    mesh = Mesh(make_log_grid(defaults.GRID_T_MIN, defaults.GRID_T_MAX, 1025),
                fns=[gpow, v])
    Sv = mesh.cuminf(gpow)
    lx = np.log(mesh.x)

    def suffix(t):
        t = np.asarray(t, dtype=float)
        out = np.interp(np.log(np.clip(t, mesh.x[0], mesh.x[-1])), lx, Sv)
        return np.where(t > mesh.x[-1],
                        Sv[-1] * (t / mesh.x[-1]) ** (1.0 - pp), out)

    S = PiecewiseFn.from_callable(suffix, gpow.breakpoints,
                                  tail0=0.0, tailinf=1.0 - pp)
    raw = integrate(S.powered(mp / pp) * dw.v2, 0.0, _INF)
    return _finish(raw, 1.0 / mp, flags)
