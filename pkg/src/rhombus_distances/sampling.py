"""Monte Carlo endpoint pairs, empirical CDFs and Kolmogorov-Smirnov checks.

Random numbers come from numpy's counter-based Philox generator. Pairs are
generated in fixed chunks of ``CHUNK_PAIRS``; chunk ``i`` uses the Philox key
``seed ^ splitmix64(i)``. Chunk boundaries never depend on the worker
count, so the output is identical for any degree of parallelism.

Per pair the four deviates are consumed in the order (u1, v1, u2, v2).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import stats

from .distributions import cdf, support
from .geometry import AdjacencyCase, RhombusPose, lattice_poses, sample_points

CHUNK_PAIRS = 1 << 16
MASK64 = (1 << 64) - 1


def splitmix64(i: int) -> int:
    """SplitMix64 finalizer, used to decorrelate chunk indices."""
    z = (i + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed ^ splitmix64(index)) & MASK64))


def _check_seed(seed):
    if int(seed) != seed or not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    case: AdjacencyCase
    side: float
    seed: int
    distances: np.ndarray

    def __len__(self):
        return len(self.distances)

    @cached_property
    def sorted(self) -> np.ndarray:
        return np.sort(self.distances)


def pair_distances(
    first: RhombusPose, second: RhombusPose, seed: int, n: int, workers: int = 1
) -> np.ndarray:
    """Distances between ``n`` uniform points of ``first`` and of ``second``."""
    seed = _check_seed(seed)
    if int(n) != n or n < 0:
        raise ValueError(f"sample size must be a nonnegative integer, got {n!r}")
    n = int(n)
    out = np.empty(n)
    nchunks = -(-n // CHUNK_PAIRS)

    def fill(i):
        lo = i * CHUNK_PAIRS
        hi = min(n, lo + CHUNK_PAIRS)
        uv = stream(seed, i).random((hi - lo, 4))
        p = sample_points(first, uv[:, 0], uv[:, 1])
        q = sample_points(second, uv[:, 2], uv[:, 3])
        out[lo:hi] = np.hypot(p[:, 0] - q[:, 0], p[:, 1] - q[:, 1])

    if workers > 1 and nchunks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(nchunks)))
    else:
        for i in range(nchunks):
            fill(i)
    return out


def sample_distances(
    case: AdjacencyCase | str, s: float, seed: int, n: int, workers: int = 1
) -> SampleBatch:
    case = AdjacencyCase.parse(case)
    first, second = lattice_poses(case, s)
    d = pair_distances(first, second, seed, n, workers)
    d.flags.writeable = False
    return SampleBatch(case, float(s), int(seed), d)


def empirical_cdf(batch: SampleBatch, d):
    """Fraction of sampled distances at most ``d`` (right-continuous)."""
    if len(batch) == 0:
        raise ValueError("empirical CDF of an empty batch")
    res = np.searchsorted(batch.sorted, d, side="right") / len(batch)
    return float(res) if np.ndim(res) == 0 else res


def ks_statistic(batch: SampleBatch) -> float:
    """One-sample Kolmogorov-Smirnov distance to the batch's model CDF."""
    n = len(batch)
    if n == 0:
        raise ValueError("KS statistic of an empty batch")
    x = batch.sorted
    F = np.asarray(cdf(batch.case, batch.side, x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max((i / n - F).max(), (F - (i - 1) / n).max()))


def ks_critical(n: int, alpha: float = 0.001, m: int | None = None) -> float:
    """Asymptotic Kolmogorov critical value, one- or two-sample."""
    c = math.sqrt(-0.5 * math.log(alpha / 2))
    if m is None:
        return c / math.sqrt(n)
    return c * math.sqrt((n + m) / (n * m))


def ks_two_sample(a, b) -> float:
    return float(stats.ks_2samp(np.asarray(a), np.asarray(b)).statistic)


def within_support(batch: SampleBatch) -> bool:
    lo, hi = support(batch.case, batch.side)
    return bool(len(batch) == 0 or (batch.sorted[0] >= lo and batch.sorted[-1] <= hi))
