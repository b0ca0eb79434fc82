"""Non-increasing rearrangement and the averaged (maximal) rearrangement.

Works on step functions over finite intervals: the rearrangement of a step
function is again a step function, obtained exactly by sorting cell values
with their lengths, so equimeasurability and the Hardy-Littlewood pairing
hold to rounding error rather than quadrature error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .axis import PiecewiseFn

__all__ = ["StepFn", "RearrangedFn", "rearrange", "double_star",
           "distribution"]


@dataclass(frozen=True)
class StepFn:
    """Right-open step function: value ``values[k]`` on [edges[k], edges[k+1])."""

    edges: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if len(e) != len(v) + 1 or np.any(np.diff(e) <= 0.0) or e[0] < 0.0:
            raise ValueError("edges must be increasing, one more than values")
        if not np.all(np.isfinite(v)):
            raise ValueError("infinite cell values")
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "values", v)

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.edges)

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.edges, t, side="right") - 1
        inside = (idx >= 0) & (idx < len(self.values))
        out = np.zeros(t.shape)
        out[inside] = self.values[idx[inside]]
        return out

    def integral(self) -> float:
        return float(np.dot(self.lengths, self.values))


def distribution(f: StepFn, lam: float) -> float:
    """Lebesgue measure of { |f| > lam } within the step function's interval."""
    return float(np.sum(f.lengths[np.abs(f.values) > lam]))


@dataclass(frozen=True)
class RearrangedFn:
    """A non-increasing step function on [0, L), extended by zero."""

    step: StepFn
    monotone: bool = True

    def __call__(self, t):
        return self.step(t)

    @property
    def support_length(self) -> float:
        return float(self.step.edges[-1])

    def as_piecewise(self) -> PiecewiseFn:
        step = self.step
        return PiecewiseFn.from_callable(
            lambda t: step(t), breakpoints=tuple(step.edges[step.edges > 0.0]),
            tail0=0.0, tailinf=0.0)


def rearrange(f: StepFn) -> RearrangedFn:
    """Non-increasing rearrangement: sort cell values, carry cell lengths."""
    order = np.argsort(-f.values, kind="stable")
    vals = f.values[order]
    lens = f.lengths[order]
    # merge equal consecutive levels so edges stay strictly increasing
    keep_vals, keep_lens = [], []
    for v, ln in zip(vals, lens):
        if keep_vals and keep_vals[-1] == v:
            keep_lens[-1] += ln
        else:
            keep_vals.append(v)
            keep_lens.append(ln)
    edges = np.concatenate([[0.0], np.cumsum(keep_lens)])
    return RearrangedFn(StepFn(edges, np.array(keep_vals)))


def double_star(fstar: RearrangedFn) -> PiecewiseFn:
    """The running average t -> (1/t) int_0^t f*; non-increasing, >= f*."""
    step = fstar.step
    if np.any(np.diff(step.values) > 0.0):
        raise ValueError("input must be non-increasing")
    edges = step.edges
    cum = np.concatenate([[0.0], np.cumsum(step.lengths * step.values)])
    top = step.values[0] if len(step.values) else 0.0

    def call(t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(edges, t, side="right") - 1,
                      0, len(step.values) - 1)
        c = cum[idx] + step(t) * (np.minimum(t, edges[-1]) - edges[idx])
        c = np.where(t >= edges[-1], cum[-1], c)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(t > 0.0, c / np.where(t > 0.0, t, 1.0), top)
        return out

    return PiecewiseFn.from_callable(
        call, breakpoints=tuple(edges[edges > 0.0]), tail0=0.0,
        tailinf=-1.0 if cum[-1] > 0.0 else 0.0)
