"""Exact piecewise PDFs and CDFs of random distances for unit rhombuses.

Every density has the form ``2d * g(d)`` with ``g`` piecewise closed form in
``d``, ``asin(sqrt(3)/(2d))``, ``asin(sqrt(3)/d)``, ``sqrt(4d^2-3)`` and
``sqrt(d^2-3)``. Side length ``s`` enters by rescaling: ``F_s(d) = F(d/s)``
and ``f_s(d) = f(d/s)/s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .geometry import AdjacencyCase

R3 = math.sqrt(3.0)
R7 = math.sqrt(7.0)
PI = math.pi
# pi/sqrt(3) shows up in almost every branch
PR3 = PI / R3


def _asin_half(d):
    """asin(sqrt(3)/(2d)), argument clamped to [-1, 1]."""
    return np.arcsin(np.clip(R3 / (2.0 * d), -1.0, 1.0))


def _asin_full(d):
    """asin(sqrt(3)/d), argument clamped to [-1, 1]."""
    return np.arcsin(np.clip(R3 / d, -1.0, 1.0))


def _root_half(d):
    return np.sqrt(np.maximum(4.0 * d * d - 3.0, 0.0))


def _root_full(d):
    return np.sqrt(np.maximum(d * d - 3.0, 0.0))


# -- within one rhombus ------------------------------------------------------

def _within_pdf(d):
    d2 = d * d
    return (
        lambda: (4 / 3 + 2 * PR3 / 9) * d2 - 16 / 3 * d + 2 * PR3,
        lambda: (8 / R3 * (1 + d2 / 3) * _asin_half(d) + (4 / 3 - 10 * PR3 / 9) * d2
                 - 16 / 3 * d + 10 / 3 * _root_half(d) - 2 * PR3),
        lambda: (4 / R3 * (1 - d2 / 3) * _asin_half(d) - (2 / 3 - 2 * PR3 / 9) * d2
                 + _root_half(d) - 2 * PR3 / 3 - 1),
    )


def _within_cdf(d):
    d2 = d * d
    d4 = d2 * d2
    return (
        lambda: (2 / 3 + PR3 / 9) * d4 - 32 / 9 * d2 * d + 2 * PR3 * d2,
        lambda: (4 / R3 * (2 * d2 + d4 / 3) * _asin_half(d) + (2 / 3 - 5 * PR3 / 9) * d4
                 - 32 / 9 * d2 * d - 2 * PR3 * d2 + (14 * d2 + 3) / 6 * _root_half(d)),
        lambda: (2 / R3 * (2 * d2 - d4 / 3) * _asin_half(d) + (PR3 / 9 - 1 / 3) * d4
                 - (2 * PR3 / 3 + 1) * d2 + (22 * d2 + 15) / 36 * _root_half(d) + 1 / 4),
    )


# -- two parallel rhombuses sharing a side -----------------------------------

def _parallel_pdf(d):
    d2 = d * d
    return (
        lambda: 4 / 3 * d - (2 / 3 + PR3 / 9) * d2,
        lambda: (-2 / R3 * (d2 + 2) * _asin_half(d) + (8 * PR3 / 9 - 2 / 3) * d2
                 + 4 / 3 * d - 11 / 6 * _root_half(d) + 2 * PR3),
        lambda: (4 * d2 / (3 * R3) * _asin_half(d) + (2 / 3 - 2 * PR3 / 9) * d2
                 - 8 / 3 * d + _root_half(d) / 3 + 2 * PR3 / 3 + 1 / 2),
        lambda: ((2 / R3 - d2 / (3 * R3)) * _asin_half(d)
                 + (2 / R3 + d2 / (3 * R3)) * _asin_full(d)
                 + (1 / 3 - PR3 / 9) * d2 - 8 / 3 * d + 7 / 12 * _root_half(d)
                 + _root_full(d) + 3 / 4 - 2 * PR3 / 3),
        lambda: ((2 / R3 - d2 / (3 * R3)) * (_asin_half(d) + _asin_full(d))
                 + (PR3 / 9 - 1 / 3) * d2 + 7 / 12 * _root_half(d)
                 + _root_full(d) / 3 - 2 * PR3 / 3 - 5 / 4),
    )


def _parallel_cdf(d):
    d2 = d * d
    d4 = d2 * d2
    return (
        lambda: 8 / 9 * d2 * d - (1 / 3 + PR3 / 18) * d4,
        lambda: (-1 / R3 * (4 * d2 + d4) * _asin_half(d) + (4 * PR3 / 9 - 1 / 3) * d4
                 + 8 / 9 * d2 * d + 2 * PR3 * d2 - (94 * d2 + 15) / 72 * _root_half(d)),
        lambda: (2 * d4 / (3 * R3) * _asin_half(d) + (1 / 3 - PR3 / 9) * d4
                 - 16 / 9 * d2 * d + (2 * PR3 / 3 + 1 / 2) * d2
                 + (10 * d2 - 3) / 36 * _root_half(d) - 5 / 24),
        lambda: ((2 * d2 / R3 - d4 / (6 * R3)) * _asin_half(d)
                 + (2 * d2 / R3 + d4 / (6 * R3)) * _asin_full(d)
                 + (1 / 6 - PR3 / 18) * d4 - 16 / 9 * d2 * d + (3 / 4 - 2 * PR3 / 3) * d2
                 + (6 * d2 + 3) / 16 * _root_half(d) + (13 * d2 + 6) / 18 * _root_full(d)
                 - 55 / 48),
        lambda: ((2 * d2 / R3 - d4 / (6 * R3)) * (_asin_half(d) + _asin_full(d))
                 + (PR3 / 18 - 1 / 6) * d4 - (2 * PR3 / 3 + 5 / 4) * d2
                 + (6 * d2 + 3) / 16 * _root_half(d) + (d2 + 6) / 6 * _root_full(d)
                 - 23 / 48),
    )


# -- two rhombuses along the long diagonal -----------------------------------

def _longdiag_pdf(d):
    d2 = d * d
    return (
        lambda: (1 / 3 - PR3 / 9) * d2,
        lambda: (-4 * d2 / (3 * R3) * _asin_half(d) + (PR3 / 3 - 1) * d2 + 8 / 3 * d
                 - _root_half(d) / 3 - 1),
        lambda: (4 / R3 * (d2 / 3 - 2) * _asin_half(d) + (1 / 3 - PR3 / 9) * d2 + 8 / 3 * d
                 - 7 / 3 * _root_half(d) + 4 * PR3 / 3 + 1),
        lambda: (4 / R3 * (d2 / 3 - 2) * _asin_half(d) + 2 * d2 / (3 * R3) * _asin_full(d)
                 + (1 - PR3 / 3) * d2 - 7 / 3 * _root_half(d) + 2 / 3 * _root_full(d)
                 + 4 * PR3 / 3 + 3),
        lambda: (2 / R3 * (4 - d2 / 3) * _asin_full(d) + (PR3 / 9 - 1 / 3) * d2
                 + 2 * _root_full(d) - 4 * PR3 / 3 - 2),
    )


def _longdiag_cdf(d):
    d2 = d * d
    d4 = d2 * d2
    return (
        lambda: (1 / 6 - PR3 / 18) * d4,
        lambda: (-2 * d4 / (3 * R3) * _asin_half(d) + (PR3 / 6 - 1 / 2) * d4
                 + 16 / 9 * d2 * d - d2 - (10 * d2 - 3) / 36 * _root_half(d) + 1 / 12),
        lambda: (2 / R3 * (d4 / 3 - 4 * d2) * _asin_half(d) + (1 / 6 - PR3 / 18) * d4
                 + 16 / 9 * d2 * d + (1 + 4 * PR3 / 3) * d2
                 - (6 * d2 + 3) / 4 * _root_half(d) + 19 / 12),
        lambda: (2 / R3 * (d4 / 3 - 4 * d2) * _asin_half(d) + d4 / (3 * R3) * _asin_full(d)
                 + (1 / 2 - PR3 / 6) * d4 + (3 + 4 * PR3 / 3) * d2
                 - (6 * d2 + 3) / 4 * _root_half(d) + (5 * d2 - 6) / 9 * _root_full(d)
                 + 11 / 12),
        lambda: (1 / R3 * (8 * d2 - d4 / 3) * _asin_full(d) + (PR3 / 18 - 1 / 6) * d4
                 - (4 * PR3 / 3 + 2) * d2 + (11 * d2 + 30) / 9 * _root_full(d) - 5),
    )


# -- two rhombuses along the short diagonal ----------------------------------

def _shortdiag_pdf(d):
    d2 = d * d
    return (
        lambda: (1 / 3 + 2 * PR3 / 9) * d2,
        lambda: (8 * d2 / (3 * R3) * _asin_half(d) + (1 / 3 - 10 * PR3 / 9) * d2
                 + 2 / 3 * _root_half(d)),
        lambda: (-4 / R3 * (d2 / 3 + 2) * _asin_half(d) + (1 / 3 + 2 * PR3 / 9) * d2
                 + 8 / 3 * d - 3 * _root_half(d) + 8 * PR3 / 3 + 1),
        lambda: (8 / R3 * _asin_full(d) - d2 + 8 / 3 * d + 8 / 3 * _root_full(d)
                 - 8 * PR3 / 3 - 4),
    )


def _shortdiag_cdf(d):
    d2 = d * d
    d4 = d2 * d2
    return (
        lambda: (1 / 6 + PR3 / 9) * d4,
        lambda: (4 * d4 / (3 * R3) * _asin_half(d) + (1 / 6 - 5 * PR3 / 9) * d4
                 + (10 * d2 - 3) / 18 * _root_half(d)),
        lambda: (-2 / R3 * (d4 / 3 + 4 * d2) * _asin_half(d) + (1 / 6 + PR3 / 9) * d4
                 + 16 / 9 * d2 * d + (8 * PR3 / 3 + 1) * d2
                 - (74 * d2 + 21) / 36 * _root_half(d) + 1 / 4),
        lambda: (8 * d2 / R3 * _asin_full(d) - d4 / 2 + 16 / 9 * d2 * d
                 - (4 + 8 * PR3 / 3) * d2 + (16 * d2 + 24) / 9 * _root_full(d) + 1),
    )


# unit-rhombus breakpoints (first = 0, last = support max)
BREAKPOINTS = {
    AdjacencyCase.WITHIN: (0.0, R3 / 2, 1.0, R3),
    AdjacencyCase.PARALLEL: (0.0, R3 / 2, 1.0, R3, 2.0, R7),
    AdjacencyCase.LONGDIAG: (0.0, 1.0, R3, 2.0, R7, 2 * R3),
    AdjacencyCase.SHORTDIAG: (0.0, R3 / 2, 1.0, R3, 2.0),
}

_BRANCHES = {
    AdjacencyCase.WITHIN: (_within_pdf, _within_cdf),
    AdjacencyCase.PARALLEL: (_parallel_pdf, _parallel_cdf),
    AdjacencyCase.LONGDIAG: (_longdiag_pdf, _longdiag_cdf),
    AdjacencyCase.SHORTDIAG: (_shortdiag_pdf, _shortdiag_cdf),
}


def _check_side(s):
    if not (isinstance(s, (int, float, np.floating, np.integer)) and s > 0 and math.isfinite(s)):
        raise ValueError(f"side length must be a positive finite number, got {s!r}")


def _as_distances(d):
    arr = np.asarray(d, dtype=float)
    if np.isnan(arr).any():
        raise ValueError("distance must not be NaN")
    return arr


def branch_index(case: AdjacencyCase, d):
    """Branch holding each unit distance; interior breakpoints go left.

    Returns -1 below the support and ``len(branches)`` above it.
    """
    bp = np.asarray(BREAKPOINTS[case])
    d = np.asarray(d, dtype=float)
    idx = np.searchsorted(bp, d, side="left") - 1
    idx = np.where(d == 0.0, 0, idx)
    return np.where(d > bp[-1], len(bp) - 1, idx)


def _evaluate(case, which, d):
    """Evaluate the bracketed branch expressions at unit distances ``d``."""
    nbranch = len(BREAKPOINTS[case]) - 1
    idx = branch_index(case, d)
    out = np.zeros_like(d)
    builder = _BRANCHES[case][which]
    for k in range(nbranch):
        mask = idx == k
        if mask.any():
            out[mask] = builder(d[mask])[k]()
    return out, idx


def unit_pdf(case: AdjacencyCase, d):
    """Density at distance ``d`` for side length 1 (array in, array out)."""
    d = np.atleast_1d(_as_distances(d)).astype(float)
    g, idx = _evaluate(case, 0, d)
    inside = (idx >= 0) & (idx < len(BREAKPOINTS[case]) - 1)
    return np.where(inside, 2.0 * d * g, 0.0)


def unit_cdf(case: AdjacencyCase, d):
    d = np.atleast_1d(_as_distances(d)).astype(float)
    val, idx = _evaluate(case, 1, d)
    val = np.where(idx < 0, 0.0, val)
    val = np.where(idx >= len(BREAKPOINTS[case]) - 1, 1.0, val)
    return np.clip(val, 0.0, 1.0)


def _unwrap(result, like):
    if np.ndim(like) == 0:
        return float(result[0])
    return result.reshape(np.shape(like))


def pdf(case: AdjacencyCase | str, s: float, d):
    """Probability density of the distance for rhombuses of side ``s``."""
    case = AdjacencyCase.parse(case)
    _check_side(s)
    x = _as_distances(d)
    return _unwrap(unit_pdf(case, np.atleast_1d(x) / s) / s, d)


def cdf(case: AdjacencyCase | str, s: float, d):
    """Probability that the distance is at most ``d``."""
    case = AdjacencyCase.parse(case)
    _check_side(s)
    x = _as_distances(d)
    return _unwrap(unit_cdf(case, np.atleast_1d(x) / s), d)


def support(case: AdjacencyCase | str, s: float = 1.0) -> tuple[float, float]:
    case = AdjacencyCase.parse(case)
    _check_side(s)
    return 0.0, BREAKPOINTS[case][-1] * s


def breakpoints(case: AdjacencyCase | str, s: float = 1.0) -> tuple[float, ...]:
    case = AdjacencyCase.parse(case)
    _check_side(s)
    return tuple(b * s for b in BREAKPOINTS[case])


def quantile(case: AdjacencyCase | str, s: float, p: float) -> float:
    """Inverse CDF by bracketed root finding within the containing branch."""
    case = AdjacencyCase.parse(case)
    _check_side(s)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    lo, hi = support(case, s)
    if p == 0.0:
        return lo
    if p == 1.0:
        return hi
    # narrow the bracket to one branch so brentq sees a smooth function
    bps = breakpoints(case, s)
    cps = [cdf(case, s, b) for b in bps]
    for k in range(len(bps) - 1):
        if cps[k] <= p <= cps[k + 1]:
            lo, hi = bps[k], bps[k + 1]
            break
    if cdf(case, s, lo) == p:
        return lo
    if cdf(case, s, hi) == p:
        return hi
    return brentq(lambda x: cdf(case, s, x) - p, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                  maxiter=200)


@dataclass(frozen=True)
class PiecewiseDistribution:
    """Distance law for one adjacency case at side length ``side``."""

    case: AdjacencyCase
    side: float = 1.0
    breakpoints: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "case", AdjacencyCase.parse(self.case))
        _check_side(self.side)
        object.__setattr__(self, "breakpoints", breakpoints(self.case, self.side))

    @property
    def support(self) -> tuple[float, float]:
        return support(self.case, self.side)

    def pdf(self, d):
        return pdf(self.case, self.side, d)

    def cdf(self, d):
        return cdf(self.case, self.side, d)

    def quantile(self, p: float) -> float:
        return quantile(self.case, self.side, p)

    def branch_functions(self) -> list[tuple[float, float, Callable, Callable]]:
        """``(lo, hi, pdf_k, cdf_k)`` per branch, each evaluator restricted to one formula."""
        out = []
        s = self.side
        bps = self.breakpoints
        builders = _BRANCHES[self.case]

        for k in range(len(bps) - 1):
            def f(d, k=k):
                x = np.asarray(d, dtype=float) / s
                return 2.0 * x * builders[0](x)[k]() / s

            def F(d, k=k):
                x = np.asarray(d, dtype=float) / s
                return builders[1](x)[k]()

            out.append((bps[k], bps[k + 1], f, F))
        return out
