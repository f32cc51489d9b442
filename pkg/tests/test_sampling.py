import math

import numpy as np
import pytest

from rhombus_distances.distributions import quantile
from rhombus_distances.geometry import BASIS_B, AdjacencyCase, lattice_poses, translated_pose
from rhombus_distances.sampling import (
    CHUNK_PAIRS,
    SampleBatch,
    empirical_cdf,
    ks_critical,
    ks_statistic,
    ks_two_sample,
    pair_distances,
    sample_distances,
    splitmix64,
    stream,
    within_support,
)

C = AdjacencyCase


def test_empty_batch():
    batch = sample_distances(C.WITHIN, 1, 0, 0)
    assert len(batch) == 0
    with pytest.raises(ValueError):
        empirical_cdf(batch, 0.5)
    with pytest.raises(ValueError):
        ks_statistic(batch)


@pytest.mark.parametrize("args", [(C.WITHIN, 1, 0, -1), (C.WITHIN, 0, 0, 10), (C.WITHIN, 1, -3, 10),
                                  (C.WITHIN, 1, 2 ** 64, 10)])
def test_bad_arguments(args):
    with pytest.raises(ValueError):
        sample_distances(*args)


def test_within_sample_mean():
    n = 1_000_000
    batch = sample_distances(C.WITHIN, 1, 99, n)
    sigma = math.sqrt(0.0708017742)
    assert abs(batch.distances.mean() - 0.5123783359) < 4 * sigma / math.sqrt(n)


def test_shortdiag_within_support():
    batch = sample_distances(C.SHORTDIAG, 1, 5, 100_000)
    assert batch.distances.min() >= 0 and batch.distances.max() <= 2
    assert within_support(batch)


def test_deterministic_regeneration():
    a = sample_distances(C.PARALLEL, 1.5, 17, 150_000)
    b = sample_distances(C.PARALLEL, 1.5, 17, 150_000)
    assert a.distances.tobytes() == b.distances.tobytes()


def test_parallel_workers_do_not_change_output():
    n = 3 * CHUNK_PAIRS + 123
    serial = sample_distances(C.LONGDIAG, 1, 42, n, workers=1)
    threaded = sample_distances(C.LONGDIAG, 1, 42, n, workers=4)
    assert serial.distances.tobytes() == threaded.distances.tobytes()


def test_prefix_stability():
    # pair i depends only on (seed, i), so shorter runs are prefixes
    long = sample_distances(C.WITHIN, 1, 8, CHUNK_PAIRS + 10)
    short = sample_distances(C.WITHIN, 1, 8, 500)
    assert np.array_equal(long.distances[:500], short.distances)


def test_deviate_order_documented():
    # first pair consumes (u1, v1, u2, v2) from chunk 0 in that order
    first, second = lattice_poses(C.LONGDIAG, 1)
    u1, v1, u2, v2 = stream(5, 0).random((1, 4))[0]
    p = np.array([first.origin.x + u1 + 0.5 * v1, first.origin.y + math.sqrt(3) / 2 * v1])
    q = np.array([second.origin.x + u2 + 0.5 * v2, second.origin.y + math.sqrt(3) / 2 * v2])
    d = sample_distances(C.LONGDIAG, 1, 5, 1).distances[0]
    assert d == pytest.approx(np.linalg.norm(p - q), abs=1e-15)


def test_splitmix_known_value():
    # first output of the reference SplitMix64 seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_batch_is_read_only():
    batch = sample_distances(C.WITHIN, 1, 1, 10)
    with pytest.raises(ValueError):
        batch.distances[0] = 0.0


def test_empirical_cdf_examples():
    batch = sample_distances(C.WITHIN, 1, 3, 1000)
    assert empirical_cdf(batch, -1.0) == 0.0
    assert empirical_cdf(batch, 10.0) == 1.0
    single = SampleBatch(C.WITHIN, 1.0, 0, np.array([1.0]))
    assert empirical_cdf(single, 1.0) == 1.0
    assert empirical_cdf(single, np.nextafter(1.0, 0)) == 0.0


def test_ks_on_quantile_grid():
    n = 200
    q = np.array([quantile(C.PARALLEL, 1, (i - 0.5) / n) for i in range(1, n + 1)])
    batch = SampleBatch(C.PARALLEL, 1.0, 0, q)
    assert ks_statistic(batch) == pytest.approx(1 / (2 * n), abs=1e-10)


def test_ks_all_zeros():
    batch = SampleBatch(C.WITHIN, 1.0, 0, np.zeros(50))
    assert ks_statistic(batch) == 1.0


def test_ks_critical_value():
    assert ks_critical(10_000) == pytest.approx(1.9495 / 100, rel=1e-4)


@pytest.mark.parametrize("case", list(C))
def test_ks_single_seed(case):
    n = 100_000
    assert ks_statistic(sample_distances(case, 1, 123, n)) < 1.95 / math.sqrt(n)


@pytest.mark.parametrize("case", list(C))
def test_adjacent_seeds_independent(case):
    n = 10_000
    a = sample_distances(case, 1, 1000, n).distances
    b = sample_distances(case, 1, 1001, n).distances
    assert not np.array_equal(a, b)
    assert ks_two_sample(a, b) < ks_critical(n, m=n)


def test_parallel_translation_symmetry():
    n = 100_000
    first, second_a = lattice_poses(C.PARALLEL, 1)
    second_b = translated_pose(first, BASIS_B)
    da = pair_distances(first, second_a, 31, n)
    db = pair_distances(first, second_b, 32, n)
    assert ks_two_sample(da, db) < ks_critical(n, m=n)
