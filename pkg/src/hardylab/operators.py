"""The supremum operator, monotone envelopes, and iterated compositions.

Central object: for weights u, b with primitive B, the operator

    (T g)(t) = sup_{tau >= t} (u(tau)/B(tau)) * int_0^tau g b.

Its building block, the *envelope* psi -> sup_{tau >= t} psi(tau), is also
what every "sup_{x <= tau} (...)" factor in the characterization terms
reduces to, and what the Stieltjes integrals against d(-sup ...) are
decrement sums of.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .axis import GridAxis, Mesh, PiecewiseFn, integrate, make_log_grid
from .weights import primitive_B

__all__ = ["MonotoneEnvelope", "sup_envelope", "running_sup_right",
           "apply_Tub", "stieltjes_vs_envelope", "iterated_lhs"]

_INF = math.inf


def running_sup_right(vals: np.ndarray, tail_limit: float = 0.0) -> np.ndarray:
    """``out[j] = max(vals[j:], tail_limit)`` -- the discrete envelope."""
    out = np.maximum.accumulate(vals[::-1])[::-1]
    if tail_limit > 0.0:
        out = np.maximum(out, tail_limit)
    return out


@dataclass
class MonotoneEnvelope:
    """Envelope values of a source function at mesh nodes.

    ``limit_inf`` is the limiting value as t -> inf; ``tail_converged``
    records whether the doubling check (value at t_max vs t_max/2) settled
    within 1e-3 relative, per the tail policy.
    """

    x: np.ndarray
    values: np.ndarray
    limit_inf: float
    tail_converged: bool = True
    start: float = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.x, t, side="left")
        idx = np.clip(idx, 0, len(self.x) - 1)
        out = self.values[idx]
        return np.where(t > self.x[-1], self.limit_inf, out)


def _tail_limit(psi: PiecewiseFn, x_max: float) -> tuple[float, bool]:
    v1 = float(psi(x_max))
    v2 = float(psi(x_max / 2.0))
    if psi.tailinf is not None:
        if psi.tailinf > 0.0 and v1 > 0.0:
            return _INF, True
        if psi.tailinf < 0.0:
            return 0.0, True
    converged = abs(v1 - v2) <= 1e-3 * max(abs(v1), abs(v2), 1e-300)
    return v1, converged


def sup_envelope(psi: PiecewiseFn, start: float = 0.0,
                 mesh: Mesh | None = None) -> MonotoneEnvelope:
    """``t -> sup_{tau >= max(t, start)} psi(tau)`` at mesh nodes."""
    if mesh is None:
        mesh = Mesh(make_log_grid(defaults.GRID_T_MIN, defaults.GRID_T_MAX,
                                  1025), fns=[psi], extra_points=[start] if start > 0.0 else [])
    x = mesh.x
    vals = np.asarray(psi(x), dtype=float)
    limit, converged = _tail_limit(psi, float(x[-1]))
    env = running_sup_right(vals, limit if limit < _INF else 0.0)
    if limit == _INF:
        env = np.full_like(env, _INF)
    if start > 0.0:
        before = x < start
        at = float(env[np.searchsorted(x, start, side="left").clip(0, len(x) - 1)]) \
            if np.any(~before) else limit
        env = np.where(before, at, env)
    return MonotoneEnvelope(x=x, values=env, limit_inf=limit,
                            tail_converged=converged, start=start)


def apply_Tub(u: PiecewiseFn, b: PiecewiseFn, g: PiecewiseFn,
              mesh: Mesh | None = None) -> PiecewiseFn:
    """The supremum operator applied to ``g``; non-increasing by construction."""
    B = primitive_B(b)
    if mesh is None:
        mesh = Mesh(make_log_grid(defaults.GRID_T_MIN, defaults.GRID_T_MAX,
                                  1025), fns=[u, b, g])
    inner = mesh.cum0(g * b)
    if not np.all(np.isfinite(inner)):
        raise ValueError("divergent inner integral of g*b")
    x = mesh.x
    with np.errstate(invalid="ignore", divide="ignore"):
        profile = np.asarray(u(x)) * inner / np.asarray(B(x))
    profile = np.where(np.isfinite(profile), profile, 0.0)
    # limiting profile value at infinity from declared tails when available
    lim = 0.0
    if u.tailinf is not None and b.tailinf is not None:
        b_exp = b.tailinf
        B_exp = b_exp + 1.0 if b_exp > -1.0 else 0.0
        g_exp = 0.0  # cumulative of g*b saturates for the families in use
        slope = u.tailinf - B_exp + g_exp
        lim = float(profile[-1]) if slope >= 0.0 else 0.0
    env = running_sup_right(profile, lim)
    lx = np.log(x)

    def call(t):
        t = np.asarray(t, dtype=float)
        out = np.interp(np.log(np.clip(t, x[0], x[-1])), lx, env)
        return np.where(t > x[-1], env[-1], out)

    return PiecewiseFn.from_callable(call, breakpoints=u.breakpoints,
                                     tail0=0.0, tailinf=None)


def stieltjes_vs_envelope(G, env: MonotoneEnvelope, lo: float, hi: float,
                          closed_left: bool = True,
                          closed_right: bool = True) -> float:
    """``int G d(-env)`` over the interval from ``lo`` to ``hi``.

    Decrements between consecutive nodes carry their mass at the right
    node; jump masses therefore sit at breakpoints whenever those are mesh
    nodes.  The residual decrement ``env(x_max) - limit_inf`` sits at
    infinity and is included only for intervals closed at infinity
    (``hi == inf``), weighted by the last finite value of G.
    """
    x = env.x
    vals = env.values
    dec = vals[:-1] - vals[1:]
    loc = x[1:]
    if callable(G):
        gv = np.asarray(G(loc), dtype=float)
    else:
        gv = np.full(len(loc), float(G))
    if closed_left:
        mask = loc >= lo
    else:
        mask = loc > lo
    if hi < _INF:
        mask &= (loc <= hi) if closed_right else (loc < hi)
    total = float(np.sum(np.where(mask, gv * dec, 0.0)))
    if hi == _INF:
        g_last = gv[-1] if len(gv) else 1.0
        total += g_last * (vals[-1] - env.limit_inf)
        if lo <= x[0] and closed_left:
            pass  # decrement at the first node itself has no mass by convention
    return total


# --------------------------------------------------------------------------
# iterated Hardy / Copson compositions (oracle left-hand sides)
# --------------------------------------------------------------------------

_KINDS = ("inner-copson", "outer-copson", "double-copson", "double-hardy")


def iterated_lhs(kind: str, h: PiecewiseFn, u: PiecewiseFn, w: PiecewiseFn,
                 m: float, q: float, mesh: Mesh | None = None) -> float:
    """Left-hand side of the four dual iterated inequalities.

    inner-copson : ( int_0^inf ( int_0^t ( int_s^inf h )^m u ds )^(q/m) w dt )^(1/q)
    outer-copson : ( int_0^inf ( int_t^inf ( int_0^s h )^m u ds )^(q/m) w dt )^(1/q)
    double-copson: ( int_0^inf ( int_t^inf ( int_s^inf h )^m u ds )^(q/m) w dt )^(1/q)
    double-hardy : ( int_0^inf ( int_0^t ( int_0^s h )^m u ds )^(q/m) w dt )^(1/q)
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if mesh is None:
        mesh = Mesh(make_log_grid(defaults.GRID_T_MIN, defaults.GRID_T_MAX,
                                  1025), fns=[h, u, w])
    if kind in ("inner-copson", "double-copson"):
        inner = mesh.cuminf(h)
    else:
        inner = mesh.cum0(h)
    u_cells = mesh.cell_masses(u)
    mid_cells = mesh.cells_weighted(inner ** m, u_cells)
    if kind in ("inner-copson", "double-hardy"):
        head = integrate(u, 0.0, float(mesh.x[0])) * float(inner[0]) ** m
        mid = Mesh.cum0_from_cells(mid_cells, head=head)
    else:
        tail = integrate(u, float(mesh.x[-1]), _INF) * float(inner[-1]) ** m
        mid = Mesh.cuminf_from_cells(mid_cells, tail=tail)
    w_cells = mesh.cell_masses(w)
    outer_cells = mesh.cells_weighted(mid ** (q / m), w_cells)
    head_w = integrate(w, 0.0, float(mesh.x[0])) * float(mid[0]) ** (q / m)
    tail_w = integrate(w, float(mesh.x[-1]), _INF) * float(mid[-1]) ** (q / m)
    total = float(np.sum(outer_cells))
    for extra in (head_w, tail_w):
        if np.isfinite(extra):
            total += extra
        elif extra == _INF:
            return _INF
    return total ** (1.0 / q)
