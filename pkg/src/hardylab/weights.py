"""Weight families, derived weights, and admissibility condition checkers.

A *weight* is a nonnegative locally integrable function on (0, inf).  From a
base weight ``v`` and a pair of exponents ``(m, p)`` the characterizations
downstream consume three derived weights

    v0(t) = t^(m/p - 1) * (int_0^t v(s) s^(m/p) ds) * (int_t^inf v)
    v1(t) = int_0^t v(s) s^(m/p) ds  +  t^(m/p) * int_t^inf v
    v2(t) = t^(m'/p') * v0(t) / v1(t)^(m'+1)

(with 1/p + 1/p' = 1), plus "tilde" variants in which the conjugates are
taken after dividing both exponents by an extra parameter ``alpha`` — those
feed the maximal-operator reduction.  Tail exponents of all derived weights
are propagated analytically from the tails of ``v`` so that infinite-range
integrals of v2 stay classified.

The condition checkers (doubling, quasi-monotonicity, subadditivity-type
Q_r, non-degeneracy) are *grid certificates*: a ``True`` verdict certifies
the inequality over the configured grid plus tail classification, not a
proof.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import defaults
from .axis import (GridAxis, Mesh, PiecewiseFn, Segment, integrate,
                   make_log_grid, sup_on)

__all__ = [
    "WeightFn",
    "DerivedWeights",
    "as_weight",
    "primitive_B",
    "cum0_fn",
    "cuminf_fn",
    "check_delta2",
    "check_quasi_increasing",
    "check_Qr",
    "check_nondegenerate",
    "derive_v012",
    "ell_A",
    "parse_weight_spec",
    "load_weight_file",
]

_INF = math.inf


class WeightFn(PiecewiseFn):
    """A :class:`PiecewiseFn` certified nonnegative on a probe grid."""

    __slots__ = ("nonnegative",)

    @staticmethod
    def wrap(pf: PiecewiseFn, check: bool = True) -> "WeightFn":
        w = WeightFn.__new__(WeightFn)
        for slot in PiecewiseFn.__slots__:
            setattr(w, slot, getattr(pf, slot))
        w.nonnegative = (not check) or _probe_nonnegative(pf)
        if check and not w.nonnegative:
            raise ValueError("weight takes negative values")
        return w


def _probe_nonnegative(pf: PiecewiseFn) -> bool:
    if pf.kind == "analytic":
        return all(s.coef >= 0.0 for s in pf.segments)
    if pf.kind == "sampled":
        return bool(np.all(pf.values >= 0.0))
    ts = np.geomspace(1e-8, 1e8, 257)
    return bool(np.all(pf(ts) >= -1e-300))


def as_weight(pf: PiecewiseFn) -> WeightFn:
    return pf if isinstance(pf, WeightFn) else WeightFn.wrap(pf)


# --------------------------------------------------------------------------
# exact / interpolated cumulatives
# --------------------------------------------------------------------------


def _analytic_pure_power(f: PiecewiseFn) -> bool:
    return f.kind == "analytic" and all(s.logexp == 0.0 for s in f.segments)


def _interp_cum(f: PiecewiseFn, from_zero: bool, tail0: float | None,
                tailinf: float | None) -> PiecewiseFn:
    ax = make_log_grid(1e-10, 1e10, 2049)
    mesh = Mesh(ax, fns=[f])
    vals = mesh.cum0(f) if from_zero else mesh.cuminf(f)
    lx, lv = np.log(mesh.x), vals

    def call(t):
        t = np.asarray(t, dtype=float)
        return np.interp(np.log(np.clip(t, mesh.x[0], mesh.x[-1])), lx, lv)

    return PiecewiseFn.from_callable(call, f.breakpoints, tail0, tailinf)


def cum0_fn(f: PiecewiseFn, tail0: float | None = None,
            tailinf: float | None = None) -> PiecewiseFn:
    """The primitive ``t -> int_0^t f`` as an evaluable function.

    Exact (closed-form) for piecewise pure powers, interpolated on a dense
    mesh otherwise.  Tail exponents may be supplied when known; for pure
    powers they are derived automatically.
    """
    if _analytic_pure_power(f):
        segs = f.segments
        head = integrate(f, 0.0, segs[0].hi if segs[0].hi < _INF else 1.0)
        if head == _INF:
            raise ValueError("primitive diverges at 0")
        seg_list = list(segs)
        cut_arr = np.array([s.lo for s in seg_list])
        off_arr = np.array([integrate(f, 0.0, s.lo) if s.lo > 0.0 else 0.0
                            for s in seg_list])

        def call(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            idx = np.searchsorted(cut_arr, t, side="right") - 1
            out = np.empty_like(t)
            for k in range(len(seg_list)):
                mask = idx == k
                if not np.any(mask):
                    continue
                s = seg_list[k]
                tk = t[mask]
                if s.lo == 0.0:
                    part = _power_head(s.coef, s.power, tk)
                else:
                    part = _power_int(s.coef, s.power, s.lo, tk)
                out[mask] = off_arr[k] + part
            return out

        t0 = segs[0].power + 1.0
        last = segs[-1]
        tinf = 0.0 if last.power < -1.0 or last.coef == 0.0 else last.power + 1.0
        return PiecewiseFn.from_callable(call, f.breakpoints,
                                         tail0 if tail0 is not None else t0,
                                         tailinf if tailinf is not None else tinf)
    return _interp_cum(f, True, tail0, tailinf)


def _power_head(c, a, t):
    return c * t ** (a + 1.0) / (a + 1.0)


def _power_int(c, a, lo, t):
    if a == -1.0:
        return c * np.log(t / lo)
    return c * (t ** (a + 1.0) - lo ** (a + 1.0)) / (a + 1.0)


def cuminf_fn(f: PiecewiseFn, tail0: float | None = None,
              tailinf: float | None = None) -> PiecewiseFn:
    """``t -> int_t^inf f``, exact for piecewise pure powers."""
    if _analytic_pure_power(f):
        segs = f.segments
        total_tail = integrate(f, segs[-1].lo if segs[-1].lo > 0.0 else 1.0,
                               _INF)
        if total_tail == _INF:
            raise ValueError("suffix integral diverges at infinity")
        seg_list = list(segs)
        cut_arr = np.array([s.lo for s in seg_list])
        tailmass = np.array([integrate(f, s.hi, _INF) if s.hi < _INF else 0.0
                             for s in seg_list])

        def call(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            idx = np.searchsorted(cut_arr, t, side="right") - 1
            out = np.empty_like(t)
            for k in range(len(seg_list)):
                mask = idx == k
                if not np.any(mask):
                    continue
                s = seg_list[k]
                tk = t[mask]
                if s.coef == 0.0:
                    out[mask] = tailmass[k]
                elif s.hi < _INF:
                    out[mask] = tailmass[k] + _power_int(
                        s.coef, s.power, 1.0, np.full_like(tk, s.hi)) \
                        - _power_int(s.coef, s.power, 1.0, tk)
                else:
                    out[mask] = -_power_tailpiece(s.coef, s.power, tk)
            return out

        first, last = segs[0], segs[-1]
        ti = last.power + 1.0 if last.coef > 0.0 else 0.0
        t0 = first.power + 1.0 if first.power < -1.0 and first.coef > 0.0 else 0.0
        return PiecewiseFn.from_callable(call, f.breakpoints,
                                         tail0 if tail0 is not None else t0,
                                         tailinf if tailinf is not None else ti)
    return _interp_cum(f, False, tail0, tailinf)


def _power_tailpiece(c, a, t):
    # int_t^inf c s^a ds for a < -1
    return c * t ** (a + 1.0) / (a + 1.0)


def primitive_B(b: PiecewiseFn) -> WeightFn:
    """``B(t) = int_0^t b``; errors out if B vanishes or diverges on (0, inf)."""
    B = cum0_fn(b)
    probe = np.geomspace(1e-8, 1e8, 64)
    vals = np.asarray(B(probe))
    if np.any(vals <= 0.0) or np.any(~np.isfinite(vals)):
        raise ValueError("primitive of b must be strictly positive and finite")
    return WeightFn.wrap(B, check=False)


# --------------------------------------------------------------------------
# condition checkers (grid certificates)
# --------------------------------------------------------------------------


def _probe_nodes() -> np.ndarray:
    return np.geomspace(defaults.GRID_T_MIN, defaults.GRID_T_MAX, 1025)


def check_delta2(phi: PiecewiseFn):
    """Doubling: smallest observed C with phi(2t) <= C phi(t) on the grid.

    Returns (verdict, C_or_witness).  The verdict is False when the ratio
    keeps escalating toward the top of the grid (exponential-type growth).
    """
    t = _probe_nodes()
    t = t[2.0 * t <= t[-1]]
    ratio = np.asarray(phi(2.0 * t)) / np.asarray(phi(t))
    ratio = np.where(np.isfinite(ratio), ratio, np.inf)
    c = float(np.max(ratio))
    if not math.isfinite(c) or c > 1e6:
        return False, float(t[int(np.argmax(ratio))])
    return True, c


def check_quasi_increasing(phi: PiecewiseFn):
    """phi(t1) <= C phi(t2) for t1 <= t2; C from a running-max scan."""
    t = _probe_nodes()
    vals = np.asarray(phi(t), dtype=float)
    ratios = np.maximum.accumulate(vals) / np.where(vals > 0.0, vals, np.inf)
    c = float(np.max(ratios))
    inner = slice(len(t) // 4, 3 * len(t) // 4)
    vals_i = vals[inner]
    c_inner = float(np.max(np.maximum.accumulate(vals_i)
                           / np.where(vals_i > 0.0, vals_i, np.inf)))
    if not math.isfinite(c) or c > 1e8 or c > 5.0 * max(c_inner, 1.0):
        return False, c
    return True, c


def check_Qr(phi: PiecewiseFn, r: float):
    """Power-mean subadditivity phi(s+t) <= C (phi(s)^r + phi(t)^r)^(1/r).

    Certified by a pairwise grid scan plus the equal-argument probe
    phi(n t) <= C n^(1/r) phi(t) for n up to 64, which catches homogeneity
    degrees above 1/r.
    """
    t = np.geomspace(defaults.GRID_T_MIN, defaults.GRID_T_MAX, 129)
    pv = np.asarray(phi(t), dtype=float)
    s_sum = t[:, None] + t[None, :]
    lhs = np.asarray(phi(s_sum.ravel())).reshape(s_sum.shape)
    rhs = (pv[:, None] ** r + pv[None, :] ** r) ** (1.0 / r)
    with np.errstate(invalid="ignore", divide="ignore"):
        c_pair = float(np.nanmax(np.where(rhs > 0.0, lhs / rhs, 0.0)))
    ns = np.array([2, 4, 8, 16, 32, 64], dtype=float)
    probes = []
    for n in ns:
        tt = t[n * t <= t[-1]]
        if len(tt) == 0:
            probes.append(0.0)
            continue
        probes.append(float(np.max(np.asarray(phi(n * tt))
                                   / (n ** (1.0 / r) * np.asarray(phi(tt))))))
    c = max([c_pair] + probes)
    growing = probes[-1] > 1.15 * probes[2] + 1e-12
    return (not growing) and math.isfinite(c), c


def check_nondegenerate(v: PiecewiseFn, m: float, p: float) -> bool:
    """Membership of ``v`` in the non-degenerate class for (m, p).

    Requires finiteness of int_0^1 v s^(m/p) and int_1^inf v together with
    divergence of int_0^1 v and int_1^inf v s^(m/p).
    """
    vs = v * PiecewiseFn.power(m / p)
    return (integrate(vs, 0.0, 1.0) < _INF
            and integrate(v, 1.0, _INF) < _INF
            and integrate(v, 0.0, 1.0) == _INF
            and integrate(vs, 1.0, _INF) == _INF)


# --------------------------------------------------------------------------
# derived weights
# --------------------------------------------------------------------------


@dataclass
class DerivedWeights:
    v0: PiecewiseFn
    v1: PiecewiseFn
    v2: PiecewiseFn
    tilde_v0: PiecewiseFn | None = None
    tilde_v1: PiecewiseFn | None = None
    tilde_v2: PiecewiseFn | None = None


def _conj(x: float) -> float:
    return x / (x - 1.0)


def _make_v2(v0, v1, m, p):
    mp = _conj(m)
    pp = _conj(p)
    lead = mp / pp
    expo = mp + 1.0
    t0 = lead + (v0.tail0 or 0.0) - expo * (v1.tail0 or 0.0)
    ti = lead + (v0.tailinf or 0.0) - expo * (v1.tailinf or 0.0)

    def call(t):
        t = np.asarray(t, dtype=float)
        num = np.asarray(v0(t)) * np.power(t, lead)
        den = np.power(np.asarray(v1(t)), expo)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(den > 0.0, num / den, 0.0)
        return out

    return PiecewiseFn.from_callable(call, v0.breakpoints, t0, ti)


def derive_v012(v: PiecewiseFn, m: float, p: float,
                alpha: float | None = None,
                check: bool = True) -> DerivedWeights:
    """Derived weights v0, v1, v2 for (m, p), plus tilde variants if ``alpha``.

    The tilde variants use the conjugates of (m/alpha, p/alpha); since v0
    and v1 depend on the exponents only through the ratio m/p they coincide
    with the plain variants, and only v2 changes.
    """
    if check and not check_nondegenerate(v, m, p):
        raise ValueError("v is degenerate for the given (m, p)")
    a0 = v.tail0
    ainf = v.tailinf
    ratio = m / p
    vs = v * PiecewiseFn.power(ratio)
    C = cum0_fn(vs)                    # int_0^t v s^(m/p)
    D = cuminf_fn(v)                   # int_t^inf v
    # tails of the building blocks (powers; log corrections ignored in tails)
    c_t0, c_ti = C.tail0, C.tailinf
    d_t0, d_ti = D.tail0, D.tailinf
    if a0 is not None:
        c_t0 = a0 + ratio + 1.0
        d_t0 = min(a0 + 1.0, 0.0)
    if ainf is not None:
        c_ti = max(ainf + ratio + 1.0, 0.0)
        d_ti = ainf + 1.0

    def v0_call(t):
        t = np.asarray(t, dtype=float)
        return np.power(t, ratio - 1.0) * np.asarray(C(t)) * np.asarray(D(t))

    v0 = PiecewiseFn.from_callable(v0_call, v.breakpoints,
                                   _opt_sum(ratio - 1.0, c_t0, d_t0),
                                   _opt_sum(ratio - 1.0, c_ti, d_ti))

    def v1_call(t):
        t = np.asarray(t, dtype=float)
        return np.asarray(C(t)) + np.power(t, ratio) * np.asarray(D(t))

    v1 = PiecewiseFn.from_callable(v1_call, v.breakpoints,
                                   _opt_sum(ratio, d_t0) if d_t0 is not None else c_t0,
                                   c_ti)
    v2 = _make_v2(v0, v1, m, p)
    out = DerivedWeights(v0=v0, v1=v1, v2=v2)
    if alpha is not None:
        out.tilde_v0 = v0
        out.tilde_v1 = v1
        out.tilde_v2 = _make_v2(v0, v1, m / alpha, p / alpha)
    return out


def _opt_sum(*xs):
    if any(x is None for x in xs):
        return None
    return float(sum(xs))


def ell_A(A0: float, Ainf: float) -> WeightFn:
    """The logarithmic weight (1+|log t|)^A0 below 1, exponent Ainf above."""
    return WeightFn.wrap(PiecewiseFn.powlog(0.0, A0, Ainf), check=False)


# --------------------------------------------------------------------------
# weight-spec text format
# --------------------------------------------------------------------------

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|inf"


def _tofloat(s: str) -> float:
    s = s.strip()
    return _INF if s == "inf" else float(s)


def _parse_expr(expr: str, base_dir: str) -> PiecewiseFn:
    expr = expr.strip()
    m = re.fullmatch(rf"pow\(\s*({_NUM})\s*\)", expr)
    if m:
        return PiecewiseFn.power(_tofloat(m.group(1)))
    m = re.fullmatch(rf"powlog\(\s*({_NUM})\s*,\s*({_NUM})\s*,\s*({_NUM})\s*\)", expr)
    if m:
        return PiecewiseFn.powlog(*(_tofloat(g) for g in m.groups()))
    m = re.fullmatch(rf"const\(\s*({_NUM})\s*\)", expr)
    if m:
        return PiecewiseFn.constant(_tofloat(m.group(1)))
    m = re.fullmatch(rf"indicator\(\s*({_NUM})\s*,\s*({_NUM})\s*\)", expr)
    if m:
        return PiecewiseFn.indicator(_tofloat(m.group(1)), _tofloat(m.group(2)))
    if expr.startswith("piecewise(") and expr.endswith(")"):
        return _parse_piecewise(expr[len("piecewise("):-1])
    m = re.fullmatch(rf"table\(\s*\"([^\"]+)\"\s*,\s*tail0\s*=\s*({_NUM})"
                     rf"\s*,\s*tailinf\s*=\s*({_NUM})\s*\)", expr)
    if m:
        return _load_table(m.group(1), _tofloat(m.group(2)),
                           _tofloat(m.group(3)), base_dir)
    raise ValueError(f"unparseable weight expression: {expr!r}")


def _parse_piecewise(body: str) -> PiecewiseFn:
    raw = []
    for part in body.split(";"):
        part = part.strip()
        m = re.fullmatch(
            rf"[\(\[]\s*({_NUM})\s*,\s*({_NUM})\s*[\)\]]\s*:\s*(.+)", part)
        if not m:
            raise ValueError(f"bad piecewise clause: {part!r}")
        lo, hi = _tofloat(m.group(1)), _tofloat(m.group(2))
        inner = m.group(3).strip()
        pm = re.fullmatch(rf"pow\(\s*({_NUM})\s*\)", inner)
        cm = re.fullmatch(rf"const\(\s*({_NUM})\s*\)", inner)
        if pm:
            raw.append((lo, hi, 1.0, _tofloat(pm.group(1))))
        elif cm:
            raw.append((lo, hi, _tofloat(cm.group(1)), 0.0))
        else:
            raise ValueError(f"unsupported piecewise clause body: {inner!r}")
    return PiecewiseFn.from_segments(raw)


def _load_table(path: str, tail0: float, tailinf: float,
                base_dir: str) -> PiecewiseFn:
    import os
    full = path if os.path.isabs(path) else os.path.join(base_dir, path)
    ts, vs = [], []
    with open(full, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["t", "value"]:
            raise ValueError("table CSV must have header 't,value'")
        for row in reader:
            if not row:
                continue
            ts.append(float(row[0]))
            vs.append(float(row[1]))
    t_arr = np.array(ts)
    v_arr = np.array(vs)
    if np.any(t_arr <= 0.0) or np.any(np.diff(t_arr) <= 0.0):
        raise ValueError("table t-column must be strictly increasing and positive")
    lt = np.log(t_arr)

    def call(t):
        t = np.asarray(t, dtype=float)
        out = np.interp(np.log(np.clip(t, t_arr[0], t_arr[-1])), lt, v_arr)
        lo = t < t_arr[0]
        hi = t > t_arr[-1]
        out = np.where(lo, v_arr[0] * (t / t_arr[0]) ** tail0, out)
        out = np.where(hi, v_arr[-1] * (t / t_arr[-1]) ** tailinf, out)
        return out

    return PiecewiseFn.from_callable(call, (t_arr[0], t_arr[-1]), tail0, tailinf)


def parse_weight_spec(text: str, base_dir: str = ".") -> dict[str, WeightFn]:
    """Parse the one-assignment-per-line weight description format."""
    out: dict[str, WeightFn] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'name = expr'")
        name, expr = line.split("=", 1)
        name = name.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ValueError(f"line {lineno}: bad weight name {name!r}")
        out[name] = as_weight(_parse_expr(expr, base_dir))
    return out


def load_weight_file(path: str) -> dict[str, WeightFn]:
    import os
    with open(path) as fh:
        return parse_weight_spec(fh.read(), base_dir=os.path.dirname(path) or ".")
