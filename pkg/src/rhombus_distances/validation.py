"""Self-consistency checks of the closed-form distributions.

The four unit rhombuses of a 2x2 block form a rhombus of side 2, so the
side-2 density must equal the mixture

    1/4 f_within + 1/2 f_parallel + 1/8 f_longdiag + 1/8 f_shortdiag

and by rescaling also ``f_within(d/2)/2``. The checks here evaluate both
sides numerically over the whole support.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .distributions import BREAKPOINTS, PiecewiseDistribution, unit_cdf, unit_pdf
from .geometry import AdjacencyCase

C = AdjacencyCase

MIXTURE_WEIGHTS = {C.WITHIN: 0.25, C.PARALLEL: 0.5, C.LONGDIAG: 0.125, C.SHORTDIAG: 0.125}

RECURSION_TOL = 1e-12
NORMALIZATION_TOL = 1e-10
DERIVATIVE_TOL = 1e-5
DERIVATIVE_STEP = 1e-6
BREAKPOINT_GUARD = 1e-9
BRANCH_GUARD = 1e-4


@dataclass(frozen=True)
class ValidationReport:
    check_name: str
    grid_size: int
    max_abs_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_abs_error < self.tolerance)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{self.check_name} {self.grid_size} {self.max_abs_error:.6e} {self.tolerance:.1e} {verdict}"


def _all_breakpoints() -> np.ndarray:
    pts = set()
    for bps in BREAKPOINTS.values():
        pts.update(bps)
    # breakpoints of the side-2 density
    pts.update(2 * b for b in BREAKPOINTS[C.WITHIN])
    return np.array(sorted(pts))


def recursion_grid(grid_size: int, eps: float = BREAKPOINT_GUARD) -> np.ndarray:
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    d = np.linspace(0.0, 2 * BREAKPOINTS[C.WITHIN][-1], grid_size)
    bps = _all_breakpoints()
    # the origin is a breakpoint, but both sides are exactly 0 there
    near = np.abs(d[:, None] - bps[None, 1:]).min(axis=1) < eps
    return d[~near]


def mixture(d, func=unit_pdf):
    return sum(w * func(case, d) for case, w in MIXTURE_WEIGHTS.items())


def check_recursion(grid_size: int = 10_000) -> ValidationReport:
    """Probabilistic sum of the four unit densities vs the side-2 density."""
    d = recursion_grid(grid_size)
    err = np.abs(mixture(d) - 0.5 * unit_pdf(C.WITHIN, d / 2)).max()
    return ValidationReport("recursion_pdf", grid_size, float(err), RECURSION_TOL)


def check_cdf_recursion(grid_size: int = 10_000) -> ValidationReport:
    d = recursion_grid(grid_size)
    err = np.abs(mixture(d, unit_cdf) - unit_cdf(C.WITHIN, d / 2)).max()
    return ValidationReport("recursion_cdf", grid_size, float(err), RECURSION_TOL)


def check_normalization(
    case: AdjacencyCase | str,
    pdf: Callable | None = None,
    cdf: Callable | None = None,
) -> ValidationReport:
    """Total mass by quadrature and the CDF at the support maximum.

    ``pdf`` and ``cdf`` default to the unit-side closed forms; overriding
    them lets a test feed in a corrupted distribution.
    """
    case = AdjacencyCase.parse(case)
    pdf = pdf or (lambda d: unit_pdf(case, d))
    cdf = cdf or (lambda d: unit_cdf(case, d))
    bps = BREAKPOINTS[case]
    mass = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for lo, hi in zip(bps[:-1], bps[1:]):
            # stay strictly inside the panel so every node uses one branch
            mass += quad(lambda x: float(np.asarray(pdf(x)).ravel()[0]), lo, hi,
                         epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    top = float(np.asarray(cdf(bps[-1])).ravel()[0])
    err = max(abs(mass - 1.0), abs(top - 1.0))
    return ValidationReport(f"normalization_{case.value}", len(bps) - 1, err, NORMALIZATION_TOL)


def check_cdf_pdf(
    case: AdjacencyCase | str,
    points_per_branch: int = 1000,
    pdf: Callable | None = None,
    cdf: Callable | None = None,
) -> ValidationReport:
    """Central-difference derivative of the CDF against the PDF.

    The error is measured relative to the peak density of the case. A
    pointwise relative error is meaningless where the density tends to 0
    (at the origin and at the support maximum).
    """
    if points_per_branch < 1:
        raise ValueError("points_per_branch must be at least 1")
    case = AdjacencyCase.parse(case)
    pdf = pdf or (lambda d: unit_pdf(case, d))
    cdf = cdf or (lambda d: unit_cdf(case, d))
    bps = BREAKPOINTS[case]
    h = DERIVATIVE_STEP
    peak = float(np.max(unit_pdf(case, np.linspace(0.0, bps[-1], 4001))))
    worst = 0.0
    for lo, hi in zip(bps[:-1], bps[1:]):
        x = np.linspace(lo + BRANCH_GUARD, hi - BRANCH_GUARD, points_per_branch)
        fd = (np.asarray(cdf(x + h)) - np.asarray(cdf(x - h))) / (2 * h)
        worst = max(worst, float(np.abs(fd - np.asarray(pdf(x))).max()) / peak)
    return ValidationReport(
        f"cdf_pdf_{case.value}", points_per_branch * (len(bps) - 1), worst, DERIVATIVE_TOL
    )


def check_continuity(case: AdjacencyCase | str, eps: float = 1e-7) -> tuple[float, float]:
    """Largest pdf and cdf jumps across interior breakpoints.

    A raw difference ``f(b + eps) - f(b - eps)`` is dominated by the slope
    (``2 * eps * |f'|``, about 1e-6). Each one-sided limit is instead
    extrapolated linearly from probes at ``eps`` and ``2 * eps``, which
    leaves an O(eps**1.5) bias.
    """
    case = AdjacencyCase.parse(case)
    b = np.array(BREAKPOINTS[case][1:-1])

    def jump(func):
        left = 2 * func(case, b - eps) - func(case, b - 2 * eps)
        right = 2 * func(case, b + eps) - func(case, b + 2 * eps)
        return float(np.abs(left - right).max())

    return jump(unit_pdf), jump(unit_cdf)


def branch_mismatch(case: AdjacencyCase | str) -> tuple[float, float]:
    """Disagreement of adjacent branch formulas evaluated exactly at their shared breakpoint."""
    case = AdjacencyCase.parse(case)
    pdf_gap = cdf_gap = 0.0
    branches = PiecewiseDistribution(case).branch_functions()
    for (_, b, f_left, F_left), (_, _, f_right, F_right) in zip(branches[:-1], branches[1:]):
        pdf_gap = max(pdf_gap, abs(float(f_left(b)) - float(f_right(b))))
        cdf_gap = max(cdf_gap, abs(float(F_left(b)) - float(F_right(b))))
    return pdf_gap, cdf_gap


def check_continuity_report(case: AdjacencyCase | str) -> list[ValidationReport]:
    case = AdjacencyCase.parse(case)
    pj, cj = check_continuity(case)
    n = len(BREAKPOINTS[case]) - 2
    return [
        ValidationReport(f"continuity_pdf_{case.value}", n, pj, 1e-8),
        ValidationReport(f"continuity_cdf_{case.value}", n, cj, 1e-10),
    ]


def run_all(cases=None) -> list[ValidationReport]:
    """Every check at its default size, in a fixed order."""
    cases = list(C) if cases is None else [AdjacencyCase.parse(c) for c in cases]
    reports = [check_recursion(), check_cdf_recursion()]
    for case in cases:
        reports.append(check_normalization(case))
        reports.append(check_cdf_pdf(case))
        reports.extend(check_continuity_report(case))
    return reports
