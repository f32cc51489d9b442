"""Least-squares polynomial approximations of the distance densities.

A degree-20 monomial basis is hopeless in double precision, so the fit
builds the discrete orthogonal polynomials of the grid (Forsythe's
three-term recurrence) on the normalized variable ``t = d / d_max`` in
extended precision with mpmath. The result is then mapped back to
coefficients of ``d**20 ... d**0`` and rounded to floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np

from .distributions import pdf, support
from .geometry import AdjacencyCase

WORKING_DIGITS = 50
DEFAULT_GRID_POINTS = 1000


class FitError(ArithmeticError):
    """The least-squares system is rank deficient."""


@dataclass(frozen=True)
class Grid:
    """Uniform fitting grid: ``points`` nodes over ``[lo, hi]``, or every ``step`` from ``lo``."""

    points: int
    lo: float
    hi: float
    spacing: str = "uniform"
    step: float | None = None

    def nodes(self) -> np.ndarray:
        if self.step is not None:
            return self.lo + self.step * np.arange(self.points)
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class FitResult:
    case: AdjacencyCase | None
    degree: int
    coefficients: tuple[float, ...]  # descending powers
    norm_of_residuals: float
    grid: Grid = field(default_factory=lambda: Grid(0, 0.0, 0.0))

    def __post_init__(self):
        if len(self.coefficients) != self.degree + 1:
            raise ValueError("need degree + 1 coefficients")

    def to_dict(self) -> dict:
        return {
            "case": self.case.value if self.case is not None else None,
            "degree": self.degree,
            "coefficients": list(self.coefficients),
            "norm_of_residuals": self.norm_of_residuals,
            "grid": {"points": self.grid.points, "spacing": self.grid.spacing,
                     "step": self.grid.step, "support": [self.grid.lo, self.grid.hi]},
        }


def fit_polynomial(x, y, degree: int, scale: float | None = None) -> tuple[list[float], float]:
    """Least-squares polynomial through ``(x, y)``.

    Returns ascending monomial coefficients in ``x`` and the residual norm.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if degree < 1:
        raise ValueError("degree must be at least 1")
    if len(x) != len(y):
        raise ValueError("x and y differ in length")
    if len(x) < degree + 1:
        raise ValueError(f"need at least {degree + 1} points for degree {degree}")
    scale = float(scale if scale is not None else np.abs(x).max() or 1.0)

    with mpmath.workdps(WORKING_DIGITS):
        mpf = mpmath.mpf
        fsum = mpmath.fsum
        S = mpf(scale)
        t = [mpf(float(v)) / S for v in x]
        resid = [mpf(float(v)) for v in y]
        zero = mpf(0)
        # values of p_{k-1}, p_k on the grid and their monomial coefficients in t
        prev, cur = [zero] * len(t), [mpf(1)] * len(t)
        P_prev, P_cur = [zero] * (degree + 2), [mpf(1)] + [zero] * (degree + 1)
        coef = [zero] * (degree + 1)
        norm_prev = None
        for k in range(degree + 1):
            norm = fsum(c * c for c in cur)
            if norm == 0 or (norm_prev is not None and norm < norm_prev * mpf(10) ** (-WORKING_DIGITS + 5)):
                raise FitError(f"rank deficient at degree {k}: grid has too few distinct points")
            # projection against the running residual (modified Gram-Schmidt)
            ck = fsum(r * c for r, c in zip(resid, cur)) / norm
            resid = [r - ck * c for r, c in zip(resid, cur)]
            for j in range(k + 1):
                coef[j] += ck * P_cur[j]
            if k == degree:
                break
            a = fsum(v * c * c for v, c in zip(t, cur)) / norm
            b = norm / norm_prev if norm_prev is not None else zero
            nxt = [(v - a) * c - b * p for v, c, p in zip(t, cur, prev)]
            P_next = [(P_cur[j - 1] if j else zero) - a * P_cur[j] - b * P_prev[j]
                      for j in range(degree + 2)]
            prev, cur, P_prev, P_cur, norm_prev = cur, nxt, P_cur, P_next, norm
        coeffs = [float(c / S ** j) for j, c in enumerate(coef)]
        nr = float(mpmath.sqrt(fsum(r * r for r in resid)))
    return coeffs, nr


def fit_pdf(
    case: AdjacencyCase | str,
    degree: int = 20,
    grid_points: int | None = DEFAULT_GRID_POINTS,
    s: float = 1.0,
    step: float | None = None,
) -> FitResult:
    """Fit the density of ``case`` on a uniform grid over its support.

    By default the grid has ``grid_points`` nodes including both support
    ends. Passing ``step`` instead samples ``0, step, 2*step, ...`` up to
    the support maximum.
    """
    case = AdjacencyCase.parse(case)
    lo, hi = support(case, s)
    if step is not None:
        if not step > 0:
            raise ValueError("grid step must be positive")
        grid = Grid(int(np.floor(hi / step + 1e-9)) + 1, lo, hi, step=float(step))
    else:
        grid = Grid(int(grid_points), lo, hi)
    if grid.points < degree + 1:
        raise ValueError(f"grid needs at least degree + 1 = {degree + 1} points")
    d = grid.nodes()
    ascending, nr = fit_polynomial(d, pdf(case, s, d), degree, scale=hi)
    return FitResult(case, degree, tuple(reversed(ascending)), nr, grid)


def eval_fit(fit: FitResult, d):
    """Horner evaluation of the fitted polynomial; no clamping."""
    res = np.polyval(np.asarray(fit.coefficients, dtype=float), np.asarray(d, dtype=float))
    return float(res) if np.ndim(res) == 0 else res
