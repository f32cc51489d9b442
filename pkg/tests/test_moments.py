import math

import numpy as np
import pytest

from rhombus_distances.geometry import AdjacencyCase
from rhombus_distances.moments import (
    expectation,
    mean_within_closed_form,
    moments,
    raw_moment,
    variance,
)
from rhombus_distances.sampling import sample_distances

from oracles import mean_by_cubature, second_moment_exact

C = AdjacencyCase
CASES = list(C)


def test_within_mean_and_second_moment():
    assert raw_moment(C.WITHIN, 1, 1) == pytest.approx(0.5123783359, abs=1e-9)
    assert raw_moment(C.WITHIN, 1, 2) == pytest.approx(1 / 3, abs=1e-12)
    assert raw_moment(C.WITHIN, 1, 0) == pytest.approx(1.0, abs=1e-12)


def test_longdiag_mean_matches_geometry():
    # the closed-form route and the geometric route agree far beyond 1e-9
    assert raw_moment(C.LONGDIAG, 1, 1) == pytest.approx(mean_by_cubature(C.LONGDIAG), abs=1e-11)


@pytest.mark.parametrize("case", CASES)
def test_moments_against_independent_oracles(case):
    assert raw_moment(case, 1, 1) == pytest.approx(mean_by_cubature(case), abs=1e-11)
    assert raw_moment(case, 1, 2) == pytest.approx(second_moment_exact(case), abs=1e-12)


def test_variance_examples():
    assert variance(C.WITHIN, 1) == pytest.approx(0.0708017742, abs=1e-9)
    assert variance(C.WITHIN, 2) == pytest.approx(4 * 0.0708017742, abs=4e-9)


def test_parallel_variance_exact():
    # E D^2 = 4/3 exactly for rhombuses sharing a side
    m1 = mean_by_cubature(C.PARALLEL)
    assert variance(C.PARALLEL, 1) == pytest.approx(4 / 3 - m1 * m1, abs=1e-11)


def test_closed_form_mean():
    assert mean_within_closed_form(1) == pytest.approx(0.5123783359, abs=1e-9)
    assert mean_within_closed_form(10) == pytest.approx(10 * mean_within_closed_form(1), rel=1e-15)
    assert abs(mean_within_closed_form(1) - raw_moment(C.WITHIN, 1, 1)) < 1e-11
    with pytest.raises(ValueError):
        mean_within_closed_form(0)


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("s", [0.5, 3.0])
def test_moment_record_scaling(case, s):
    unit = moments(case, 1.0)
    rec = moments(case, s)
    assert rec.mean == pytest.approx(s * unit.mean, rel=1e-12)
    assert rec.second_raw == pytest.approx(s * s * unit.second_raw, rel=1e-12)
    assert rec.variance == pytest.approx(rec.second_raw - rec.mean ** 2, rel=1e-12)
    assert rec.variance > 0


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        raw_moment(C.WITHIN, 1, -1)
    with pytest.raises(ValueError):
        raw_moment(C.WITHIN, 1, 1.5)


@pytest.mark.parametrize("case", CASES)
def test_quadrature_converges(case):
    coarse = raw_moment(case, 1, 1, tol=1e-10)
    fine = raw_moment(case, 1, 1, tol=5e-11)
    assert abs(coarse - fine) < 1e-10


@pytest.mark.parametrize("case", CASES)
def test_expectation_consistency(case):
    assert expectation(case, 1, lambda d: d) == pytest.approx(raw_moment(case, 1, 1), abs=1e-12)
    assert expectation(case, 2, lambda d: 1.0) == pytest.approx(1.0, abs=1e-12)


def test_expectation_second_power_within():
    assert expectation(C.WITHIN, 1, lambda d: d * d) == pytest.approx(1 / 3, abs=1e-12)


def test_expectation_negative_power():
    # E[1/D] for one rhombus: integrable since the density ~ d near 0
    inv = expectation(C.WITHIN, 1, lambda d: 1 / d, integrability_exponent=1.0)
    batch = sample_distances(C.WITHIN, 1, 3, 400_000)
    x = 1 / batch.distances
    assert inv == pytest.approx(x.mean(), abs=5 * x.std() / math.sqrt(len(x)))
    # the density ~ d^3 for the vertex-sharing cases, so d^-3 is still integrable
    val = expectation(C.LONGDIAG, 1, lambda d: d ** -3, integrability_exponent=3.0)
    assert np.isfinite(val) and val > 0


@pytest.mark.parametrize(
    "case, alpha", [(C.WITHIN, 2.0), (C.PARALLEL, 3.0), (C.LONGDIAG, 4.0), (C.SHORTDIAG, 4.5)]
)
def test_expectation_rejects_divergent(case, alpha):
    with pytest.raises(ValueError):
        expectation(case, 1, lambda d: d ** -alpha, integrability_exponent=alpha)


@pytest.mark.parametrize("case", CASES)
def test_monte_carlo_means_within_four_standard_errors(case):
    batch = sample_distances(case, 1.0, 2024, 1_000_000)
    se = batch.distances.std() / math.sqrt(len(batch))
    assert abs(batch.distances.mean() - raw_moment(case, 1, 1)) < 4 * se
