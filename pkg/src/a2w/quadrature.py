"""Adaptive 1D quadrature for power-times-smooth integrands.

Panels are Gauss-Legendre order 10; refinement is worst-first bisection
driven by a split-comparison error estimate. Intervals straddling 0 are
split there first. A panel touching 0 with a certified negative power
behavior is handled by a power-law model: for f ~ C x^s the Gauss value
underestimates the panel mass by a computable factor, which gives both a
correction-free error bound and a geometric tail argument, so grading
toward 0 terminates without ever sampling the singularity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import heapq
import math

import numpy as np

__all__ = [
    "QuadratureBudgetError",
    "PointwiseMatrixFunction",
    "adaptive_quad",
]

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(10)
_NODES01 = (_NODES + 1.0) / 2.0
_WEIGHTS01 = _WEIGHTS / 2.0


class QuadratureBudgetError(ArithmeticError):
    """Panel budget exhausted before reaching the requested tolerance."""


@dataclass(frozen=True)
class PointwiseMatrixFunction:
    """Matrix-valued function given entrywise, for numeric averaging.

    entry(i, j) returns a vectorized callable ndarray -> ndarray. The
    singular_exponent is a certified lower bound s with |entries(x)| =
    O(|x|^s) as x -> 0; None means entries extend continuously through 0.
    """

    n: int
    entry: Callable[[int, int], Callable[[np.ndarray], np.ndarray]]
    singular_exponent: Fraction | None = None


def _gl_panel(f, lo: float, hi: float) -> complex:
    mid = (lo + hi) / 2.0
    half = (hi - lo) / 2.0
    vals = np.asarray(f(mid + half * _NODES), dtype=complex)
    return complex(half * np.dot(_WEIGHTS, vals))


def _gauss_power_deficit(s: float) -> float:
    """True-over-Gauss ratio for x^s on a panel [0, L]; 1 iff the rule is exact."""
    gauss = float(np.dot(_WEIGHTS01, _NODES01**s))
    return (1.0 / (s + 1.0)) / gauss


def _graded_cuts(lo: float, hi: float, levels: int) -> list[float]:
    """Panel boundaries geometrically graded toward both endpoints."""
    width = hi - lo
    cuts = {lo, hi}
    for k in range(1, levels + 1):
        cuts.add(lo + width * 2.0**-k)
        cuts.add(hi - width * 2.0**-k)
    ordered = sorted(c for c in cuts if lo <= c <= hi)
    out = [ordered[0]]
    for c in ordered[1:]:
        if c > out[-1]:
            out.append(c)
    return out


def _refine_positive_side(f, lo: float, hi: float, tol_abs: float,
                          s: float | None, budget: int,
                          grading: int = 0) -> tuple[complex, int]:
    """Adaptive integral over [lo, hi] with 0 <= lo; singular model exponent s.

    The panel whose left edge is 0 gets a certified error from the power
    model: for a pure power the Gauss value is off by exactly the deficit
    ratio, and that holds for any exponent > -1 (fractional positive
    powers are continuous but still non-smooth at 0). Other panels learn
    their error from one split-and-compare round; panels with pending
    comparisons count as unknown so the loop cannot declare convergence
    while any remain (inf minus inf is NaN, which would end the loop).
    """
    singular = lo == 0.0 and s is not None
    deficit_gap = abs(_gauss_power_deficit(s) - 1.0) if singular else 0.0

    def panel_state(a: float, b: float):
        val = _gl_panel(f, a, b)
        if a == 0.0 and singular:
            err = abs(val) * deficit_gap * 2.0 + 1e-300
        else:
            err = math.inf  # unknown until first split comparison
        return val, err

    cuts = _graded_cuts(lo, hi, grading) if grading > 0 else [lo, hi]
    heap = []
    counter = 0
    used = 0
    finite_err = 0.0
    unknown = 0
    for a, b in zip(cuts, cuts[1:]):
        val, err = panel_state(a, b)
        used += 1
        heap.append((-err, counter, a, b, val))
        counter += 1
        if err == math.inf:
            unknown += 1
        else:
            finite_err += err
    heapq.heapify(heap)

    while unknown > 0 or finite_err > tol_abs:
        if used >= budget:
            raise QuadratureBudgetError("panel budget exhausted")
        neg_err, _, a, b, old_val = heapq.heappop(heap)
        if -neg_err == math.inf:
            unknown -= 1
        else:
            finite_err -= -neg_err
        mid = (a + b) / 2.0
        used += 2
        lv, lerr = panel_state(a, mid)
        rv, rerr = panel_state(mid, b)
        if lerr == math.inf:
            lerr = abs((lv + rv) - old_val) / 2.0 + 1e-300
        if rerr == math.inf:
            rerr = abs((lv + rv) - old_val) / 2.0 + 1e-300
        counter += 1
        heapq.heappush(heap, (-lerr, counter, a, mid, lv))
        counter += 1
        heapq.heappush(heap, (-rerr, counter, mid, b, rv))
        finite_err += lerr + rerr
    return sum(item[4] for item in heap), used


def adaptive_quad(f, a: float, b: float, tol: float,
                  singular_exponent=None, panel_budget: int = 20000,
                  endpoint_grading: int = 0, scale: float | None = None) -> complex:
    """Integral of f over [a, b] with absolute error about tol * (scale + |result|).

    f must accept ndarray input. singular_exponent certifies the power
    behavior of f at 0; it is required (and only used) when the closed
    interval touches 0 and the behavior is non-smooth there.

    endpoint_grading > 0 seeds that many geometrically shrinking panels
    toward each endpoint before refinement. Split-compare cannot detect
    mass hiding between the outermost Gauss node and the boundary, so
    callers whose integrands concentrate at interval endpoints (sharp
    reciprocal peaks of oscillating weights) should grade explicitly.
    The graded panels also supply the mass estimate that tol is relative
    to; a single coarse panel would miss endpoint peaks entirely and
    turn a relative request into one far tighter than intended.

    scale sets the magnitude against which tol is relative; it defaults
    to 1, which turns tol into an absolute floor for integrals much
    smaller than 1. Callers averaging tiny-mass entries (matrix averages
    over short intervals) should pass their natural scale, e.g. the
    largest diagonal mass, to keep the error relative to it. scale = 0
    requests purely relative control and is only safe for integrands
    without cancellation.
    """
    if not a < b:
        raise ValueError(f"empty integration interval [{a}, {b}]")
    s = float(singular_exponent) if singular_exponent is not None else None
    if s is not None and s <= -1.0 and a <= 0.0 <= b:
        raise ValueError("integrand is certified non-integrable at 0")

    pieces: list[tuple[float, float]] = []
    if a < 0.0 < b:
        pieces = [(a, 0.0), (0.0, b)]
    else:
        pieces = [(a, b)]

    mass = 0.0
    for lo, hi in pieces:
        seeds = _graded_cuts(lo, hi, endpoint_grading) if endpoint_grading > 0 else [lo, hi]
        for u, v in zip(seeds, seeds[1:]):
            mass += abs(_gl_panel(f, u, v))
    floor = 1.0 if scale is None else abs(scale)
    tol_abs = tol * (floor + mass)
    if tol_abs == 0.0:
        tol_abs = 1e-290  # zero integrand: converge once split-compare agrees

    total = 0j
    budget = panel_budget
    for lo, hi in pieces:
        if budget < 1:
            raise QuadratureBudgetError("panel budget exhausted")
        share = tol_abs * (hi - lo) / (b - a)
        if hi <= 0.0:
            # reflect to the positive axis so 0 is always a left endpoint
            def g(u, _f=f):
                return _f(-u)
            val, used = _refine_positive_side(g, -hi, -lo, share, s, budget,
                                              grading=endpoint_grading)
        else:
            val, used = _refine_positive_side(f, lo, hi, share, s, budget,
                                              grading=endpoint_grading)
        total += val
        budget -= used
    return total
