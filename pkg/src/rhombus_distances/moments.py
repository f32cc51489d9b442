"""Moments and expectations of the rhombus distance distributions."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, asdict
from typing import Callable

from scipy.integrate import IntegrationWarning, quad

from .distributions import PiecewiseDistribution
from .geometry import AdjacencyCase

# Order m of the density near zero, pdf(d) ~ c * d**m: a shared area gives
# m = 1, a shared side m = 2, a shared vertex m = 3.
SMALL_DISTANCE_ORDER = {
    AdjacencyCase.WITHIN: 1,
    AdjacencyCase.PARALLEL: 2,
    AdjacencyCase.LONGDIAG: 3,
    AdjacencyCase.SHORTDIAG: 3,
}


@dataclass(frozen=True)
class MomentsRecord:
    case: AdjacencyCase
    side: float
    mean: float
    second_raw: float
    variance: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["case"] = self.case.value
        return out


def _integrate(case, s, integrand, tol):
    """Sum of adaptive Gauss-Kronrod integrals, one panel per branch."""
    dist = PiecewiseDistribution(AdjacencyCase.parse(case), s)
    total = 0.0
    with warnings.catch_warnings():
        # roundoff warnings only mean the panel already hit machine precision
        warnings.simplefilter("ignore", IntegrationWarning)
        for lo, hi, f, _ in dist.branch_functions():
            val, _err = quad(lambda x: integrand(x) * f(x), lo, hi,
                             epsabs=tol, epsrel=tol, limit=200)
            total += val
    return total


def raw_moment(case: AdjacencyCase | str, s: float, k: int, tol: float = 1e-13) -> float:
    """E[D**k] by quadrature with the branch breakpoints as panel edges."""
    if int(k) != k or k < 0:
        raise ValueError(f"moment order must be a nonnegative integer, got {k!r}")
    k = int(k)
    return _integrate(case, s, lambda x: x ** k, tol)


def variance(case: AdjacencyCase | str, s: float) -> float:
    m1 = raw_moment(case, s, 1)
    return raw_moment(case, s, 2) - m1 * m1


def moments(case: AdjacencyCase | str, s: float = 1.0) -> MomentsRecord:
    case = AdjacencyCase.parse(case)
    m1 = raw_moment(case, s, 1)
    m2 = raw_moment(case, s, 2)
    return MomentsRecord(case, float(s), m1, m2, m2 - m1 * m1)


def mean_within_closed_form(s: float = 1.0) -> float:
    """Exact mean distance between two points of one rhombus of side ``s``."""
    if not s > 0:
        raise ValueError(f"side length must be positive, got {s}")
    r3 = math.sqrt(3.0)
    logs = 7.0 * math.log(2 * r3 + 3) - 6.0 * math.log(2 * r3 - 3)
    return s * (r3 / 8 + 3 / 40 + logs / 80)


def expectation(
    case: AdjacencyCase | str,
    s: float,
    g: Callable[[float], float],
    integrability_exponent: float = 0.0,
    tol: float = 1e-12,
) -> float:
    """E[g(D)] for a caller-supplied ``g`` with ``g(d) = O(d**-alpha)`` near 0.

    ``integrability_exponent`` is that alpha. Since the density vanishes like
    ``d**m`` at the origin (see ``SMALL_DISTANCE_ORDER``), the integral is
    only accepted when ``alpha < m + 1``.
    """
    case = AdjacencyCase.parse(case)
    order = SMALL_DISTANCE_ORDER[case]
    if not integrability_exponent < order + 1:
        raise ValueError(
            f"E[g(D)] diverges for {case.value}: density ~ d^{order} near 0, "
            f"g ~ d^-{integrability_exponent} needs exponent < {order + 1}"
        )
    return _integrate(case, s, g, tol)
